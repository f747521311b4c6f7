#pragma once

// Test-only helpers, independent of the library paths they check.

#include <optional>
#include <vector>

#include "weylcurv/scalar.hpp"

namespace oracles {

// Exact Gaussian elimination on an augmented matrix (rows x (cols+1)).
// Returns the unique solution, or nullopt when the system is singular,
// underdetermined or inconsistent.
inline std::optional<std::vector<weylcurv::Rational>> solve_unique(
    std::vector<std::vector<weylcurv::Rational>> aug, int cols) {
    using weylcurv::Rational;
    const int rows = static_cast<int>(aug.size());
    int row = 0;
    std::vector<int> pivot_col;
    for (int col = 0; col < cols && row < rows; ++col) {
        int piv = -1;
        for (int r = row; r < rows; ++r)
            if (aug[r][col].sign() != 0) {
                piv = r;
                break;
            }
        if (piv < 0) continue;
        std::swap(aug[row], aug[piv]);
        Rational inv = Rational(1) / aug[row][col];
        for (int c = col; c <= cols; ++c) aug[row][c] *= inv;
        for (int r = 0; r < rows; ++r) {
            if (r == row) continue;
            Rational f = aug[r][col];
            if (f.sign() == 0) continue;
            for (int c = col; c <= cols; ++c) aug[r][c] -= f * aug[row][c];
        }
        pivot_col.push_back(col);
        ++row;
    }
    if (static_cast<int>(pivot_col.size()) != cols) return std::nullopt;
    for (int r = row; r < rows; ++r)
        if (aug[r][cols].sign() != 0) return std::nullopt;  // inconsistent
    std::vector<Rational> x(cols);
    for (int r = 0; r < static_cast<int>(pivot_col.size()); ++r) x[pivot_col[r]] = aug[r][cols];
    return x;
}

}  // namespace oracles
