#pragma once

#include <cassert>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "weylcurv/errors.hpp"
#include "weylcurv/scalar.hpp"

namespace weylcurv {

// Dense storage only; dimensions are desk scale.
inline constexpr int kMaxDimension = 16;

inline void check_dimension(int n) {
    if (n < 2 || n > kMaxDimension)
        throw DimensionError("dimension must be in [2, " + std::to_string(kMaxDimension) +
                             "], got " + std::to_string(n));
}

// Indices are 0-based everywhere in memory; the serialization layer is the
// only place that speaks 1-based. Storage is row-major in index order.

template <class S>
class Tensor2T {
public:
    Tensor2T() = default;
    explicit Tensor2T(int n) : n_(n), e_(static_cast<std::size_t>(n) * n) { assert(n >= 0); }

    int dim() const { return n_; }

    S& operator()(int i, int j) { return e_[idx(i, j)]; }
    const S& operator()(int i, int j) const { return e_[idx(i, j)]; }

    Tensor2T transposed() const {
        Tensor2T t(n_);
        for (int i = 0; i < n_; ++i)
            for (int j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Tensor2T& operator+=(const Tensor2T& o) {
        assert(n_ == o.n_);
        for (std::size_t k = 0; k < e_.size(); ++k) e_[k] += o.e_[k];
        return *this;
    }
    Tensor2T& operator-=(const Tensor2T& o) {
        assert(n_ == o.n_);
        for (std::size_t k = 0; k < e_.size(); ++k) e_[k] -= o.e_[k];
        return *this;
    }
    Tensor2T& operator*=(const S& c) {
        for (auto& v : e_) v *= c;
        return *this;
    }

    friend Tensor2T operator+(Tensor2T a, const Tensor2T& b) { return a += b; }
    friend Tensor2T operator-(Tensor2T a, const Tensor2T& b) { return a -= b; }
    friend Tensor2T operator*(const S& c, Tensor2T a) { return a *= c; }
    friend bool operator==(const Tensor2T&, const Tensor2T&) = default;

private:
    std::size_t idx(int i, int j) const {
        assert(i >= 0 && i < n_ && j >= 0 && j < n_);
        return static_cast<std::size_t>(i) * n_ + j;
    }

    int n_ = 0;
    std::vector<S> e_;
};

template <class S>
class Tensor3T {
public:
    Tensor3T() = default;
    explicit Tensor3T(int n) : n_(n), e_(static_cast<std::size_t>(n) * n * n) { assert(n >= 0); }

    int dim() const { return n_; }

    S& operator()(int i, int j, int k) { return e_[idx(i, j, k)]; }
    const S& operator()(int i, int j, int k) const { return e_[idx(i, j, k)]; }

    Tensor3T& operator+=(const Tensor3T& o) {
        assert(n_ == o.n_);
        for (std::size_t k = 0; k < e_.size(); ++k) e_[k] += o.e_[k];
        return *this;
    }
    Tensor3T& operator-=(const Tensor3T& o) {
        assert(n_ == o.n_);
        for (std::size_t k = 0; k < e_.size(); ++k) e_[k] -= o.e_[k];
        return *this;
    }
    Tensor3T& operator*=(const S& c) {
        for (auto& v : e_) v *= c;
        return *this;
    }

    friend Tensor3T operator+(Tensor3T a, const Tensor3T& b) { return a += b; }
    friend Tensor3T operator-(Tensor3T a, const Tensor3T& b) { return a -= b; }
    friend Tensor3T operator*(const S& c, Tensor3T a) { return a *= c; }
    friend bool operator==(const Tensor3T&, const Tensor3T&) = default;

private:
    std::size_t idx(int i, int j, int k) const {
        assert(i >= 0 && i < n_ && j >= 0 && j < n_ && k >= 0 && k < n_);
        return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
    }

    int n_ = 0;
    std::vector<S> e_;
};

template <class S>
class Tensor4T {
public:
    Tensor4T() = default;
    explicit Tensor4T(int n) : n_(n), e_(static_cast<std::size_t>(n) * n * n * n) {
        assert(n >= 0);
    }

    int dim() const { return n_; }

    S& operator()(int i, int j, int k, int l) { return e_[idx(i, j, k, l)]; }
    const S& operator()(int i, int j, int k, int l) const { return e_[idx(i, j, k, l)]; }

    Tensor4T& operator+=(const Tensor4T& o) {
        assert(n_ == o.n_);
        for (std::size_t k = 0; k < e_.size(); ++k) e_[k] += o.e_[k];
        return *this;
    }
    Tensor4T& operator-=(const Tensor4T& o) {
        assert(n_ == o.n_);
        for (std::size_t k = 0; k < e_.size(); ++k) e_[k] -= o.e_[k];
        return *this;
    }
    Tensor4T& operator*=(const S& c) {
        for (auto& v : e_) v *= c;
        return *this;
    }

    friend Tensor4T operator+(Tensor4T a, const Tensor4T& b) { return a += b; }
    friend Tensor4T operator-(Tensor4T a, const Tensor4T& b) { return a -= b; }
    friend Tensor4T operator*(const S& c, Tensor4T a) { return a *= c; }
    friend bool operator==(const Tensor4T&, const Tensor4T&) = default;

private:
    std::size_t idx(int i, int j, int k, int l) const {
        assert(i >= 0 && i < n_ && j >= 0 && j < n_ && k >= 0 && k < n_ && l >= 0 && l < n_);
        return ((static_cast<std::size_t>(i) * n_ + j) * n_ + k) * n_ + l;
    }

    int n_ = 0;
    std::vector<S> e_;
};

template <class S>
S max_abs(const Tensor2T<S>& t) {
    S m = scalar_traits<S>::zero();
    for (int i = 0; i < t.dim(); ++i)
        for (int j = 0; j < t.dim(); ++j) {
            S a = scalar_traits<S>::abs_value(t(i, j));
            if (m < a) m = a;
        }
    return m;
}

template <class S>
S max_abs(const Tensor3T<S>& t) {
    S m = scalar_traits<S>::zero();
    for (int i = 0; i < t.dim(); ++i)
        for (int j = 0; j < t.dim(); ++j)
            for (int k = 0; k < t.dim(); ++k) {
                S a = scalar_traits<S>::abs_value(t(i, j, k));
                if (m < a) m = a;
            }
    return m;
}

template <class S>
S max_abs(const Tensor4T<S>& t) {
    S m = scalar_traits<S>::zero();
    for (int i = 0; i < t.dim(); ++i)
        for (int j = 0; j < t.dim(); ++j)
            for (int k = 0; k < t.dim(); ++k)
                for (int l = 0; l < t.dim(); ++l) {
                    S a = scalar_traits<S>::abs_value(t(i, j, k, l));
                    if (m < a) m = a;
                }
    return m;
}

// Antisymmetric bilinear form. Entries satisfy psi(i,j) = -psi(j,i); the
// invariant is enforced at every construction site.
template <class S>
class TwoFormT {
public:
    TwoFormT() = default;
    explicit TwoFormT(int n) : m_(n) {}

    static TwoFormT from_matrix(Tensor2T<S> m) {
        for (int i = 0; i < m.dim(); ++i)
            for (int j = i; j < m.dim(); ++j)
                if (!scalar_traits<S>::is_zero(m(i, j) + m(j, i)))
                    throw ShapeError("matrix is not antisymmetric");
        TwoFormT f;
        f.m_ = std::move(m);
        return f;
    }

    int dim() const { return m_.dim(); }

    const S& operator()(int i, int j) const { return m_(i, j); }

    // Sets the (i,j) entry and its mirror. i == j requires a zero value.
    void set(int i, int j, const S& v) {
        if (i == j && !scalar_traits<S>::is_zero(v))
            throw ShapeError("two-form diagonal entries must be zero");
        m_(i, j) = v;
        if (i != j) m_(j, i) = -v;
    }

    const Tensor2T<S>& matrix() const { return m_; }

    TwoFormT& operator+=(const TwoFormT& o) {
        m_ += o.m_;
        return *this;
    }
    TwoFormT& operator*=(const S& c) {
        m_ *= c;
        return *this;
    }
    friend TwoFormT operator+(TwoFormT a, const TwoFormT& b) { return a += b; }
    friend TwoFormT operator*(const S& c, TwoFormT a) { return a *= c; }
    friend TwoFormT operator-(const TwoFormT& a) {
        TwoFormT r = a;
        r *= scalar_traits<S>::from_fraction(-1, 1);
        return r;
    }
    friend bool operator==(const TwoFormT&, const TwoFormT&) = default;

private:
    Tensor2T<S> m_;
};

template <class S>
S max_abs(const TwoFormT<S>& t) {
    return max_abs(t.matrix());
}

namespace detail {

// Gauss-Jordan with partial pivoting. Exact over Rational; the pivot search
// doubles as the singularity test.
template <class S>
Tensor2T<S> invert_matrix(const Tensor2T<S>& m) {
    const int n = m.dim();
    std::vector<std::vector<S>> a(n, std::vector<S>(2 * n, scalar_traits<S>::zero()));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[i][j] = m(i, j);
        a[i][n + i] = scalar_traits<S>::from_fraction(1, 1);
    }
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        S best = scalar_traits<S>::zero();
        for (int r = col; r < n; ++r) {
            S v = scalar_traits<S>::abs_value(a[r][col]);
            if (!scalar_traits<S>::is_zero(v) && (piv < 0 || best < v)) {
                piv = r;
                best = v;
            }
        }
        if (piv < 0) throw DegeneracyError("matrix is singular");
        std::swap(a[col], a[piv]);
        S inv_pivot = scalar_traits<S>::from_fraction(1, 1) / a[col][col];
        for (int c = 0; c < 2 * n; ++c) a[col][c] *= inv_pivot;
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            S f = a[r][col];
            if (scalar_traits<S>::is_zero(f)) continue;
            for (int c = 0; c < 2 * n; ++c) a[r][c] -= f * a[col][c];
        }
    }
    Tensor2T<S> out(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out(i, j) = a[i][n + j];
    return out;
}

// Sylvester inertia of a symmetric matrix via congruence diagonalization.
// Zero diagonal pivots are repaired by a diagonal swap or, failing that, by
// the congruence e_r -> e_r + e_c against a nonzero off-diagonal entry.
template <class S>
std::pair<int, int> symmetric_signature(Tensor2T<S> a) {
    const int n = a.dim();
    auto swap_basis = [&](int x, int y) {
        for (int c = 0; c < n; ++c) std::swap(a(x, c), a(y, c));
        for (int r = 0; r < n; ++r) std::swap(a(r, x), a(r, y));
    };
    int p = 0, q = 0;
    for (int k = 0; k < n; ++k) {
        if (scalar_traits<S>::is_zero(a(k, k))) {
            int j = -1;
            for (int r = k + 1; r < n; ++r)
                if (!scalar_traits<S>::is_zero(a(r, r))) {
                    j = r;
                    break;
                }
            if (j >= 0) {
                swap_basis(k, j);
            } else {
                int r0 = -1, c0 = -1;
                for (int r = k; r < n && r0 < 0; ++r)
                    for (int c = r + 1; c < n; ++c)
                        if (!scalar_traits<S>::is_zero(a(r, c))) {
                            r0 = r;
                            c0 = c;
                            break;
                        }
                if (r0 < 0) break;  // remaining block is zero
                for (int c = 0; c < n; ++c) a(r0, c) += a(c0, c);
                for (int r = 0; r < n; ++r) a(r, r0) += a(r, c0);
                if (r0 != k) swap_basis(k, r0);
            }
        }
        if (scalar_traits<S>::is_zero(a(k, k))) break;
        for (int r = k + 1; r < n; ++r) {
            if (scalar_traits<S>::is_zero(a(r, k))) continue;
            S f = a(r, k) / a(k, k);
            for (int c = 0; c < n; ++c) a(r, c) -= f * a(k, c);
            for (int rr = 0; rr < n; ++rr) a(rr, r) -= f * a(rr, k);
        }
        if (scalar_traits<S>::zero() < a(k, k))
            ++p;
        else
            ++q;
    }
    return {p, q};
}

}  // namespace detail

// Nondegenerate symmetric inner product with its exact inverse and Sylvester
// signature, both computed once at construction.
template <class S>
class InnerProductT {
public:
    InnerProductT() = default;

    // Canonical orthonormal form: p entries +1 followed by q entries -1.
    static InnerProductT from_signature(int p, int q) {
        if (p < 0 || q < 0) throw DimensionError("signature counts must be nonnegative");
        check_dimension(p + q);
        const int n = p + q;
        Tensor2T<S> m(n);
        for (int i = 0; i < n; ++i)
            m(i, i) = scalar_traits<S>::from_fraction(i < p ? 1 : -1, 1);
        InnerProductT h;
        h.m_ = m;
        h.inv_ = std::move(m);
        h.p_ = p;
        h.q_ = q;
        return h;
    }

    static InnerProductT from_matrix(const Tensor2T<S>& m) {
        check_dimension(m.dim());
        for (int i = 0; i < m.dim(); ++i)
            for (int j = i + 1; j < m.dim(); ++j)
                if (!scalar_traits<S>::is_zero(m(i, j) - m(j, i)))
                    throw ShapeError("inner product matrix is not symmetric");
        InnerProductT h;
        h.inv_ = detail::invert_matrix(m);
        h.m_ = m;
        auto sig = detail::symmetric_signature(m);
        h.p_ = sig.first;
        h.q_ = sig.second;
        assert(h.p_ + h.q_ == m.dim());
        return h;
    }

    int dim() const { return m_.dim(); }
    const Tensor2T<S>& matrix() const { return m_; }
    const Tensor2T<S>& inverse() const { return inv_; }
    std::pair<int, int> signature() const { return {p_, q_}; }

    friend bool operator==(const InnerProductT&, const InnerProductT&) = default;

private:
    Tensor2T<S> m_;
    Tensor2T<S> inv_;
    int p_ = 0;
    int q_ = 0;
};

// Contracts two slots of a rank-4 tensor against the inverse inner product:
// out(r, s) = sum_{a,b} h^{ab} t(..a in slot_a.. ..b in slot_b..), with the
// two free slots kept in ascending slot order. Slots are 1-based.
template <class S>
Tensor2T<S> contract(const Tensor4T<S>& t, const InnerProductT<S>& h, int slot_a, int slot_b) {
    if (slot_a < 1 || slot_a > 4 || slot_b < 1 || slot_b > 4 || slot_a == slot_b)
        throw ShapeError("contraction slots must be distinct and in {1,2,3,4}");
    if (t.dim() != h.dim()) throw DimensionError("tensor/inner product dimension mismatch");
    const int n = t.dim();
    int free1 = -1, free2 = -1;
    for (int s = 1; s <= 4; ++s) {
        if (s == slot_a || s == slot_b) continue;
        (free1 < 0 ? free1 : free2) = s;
    }
    Tensor2T<S> out(n);
    int ix[4];
    for (int r = 0; r < n; ++r)
        for (int s = 0; s < n; ++s) {
            S acc = scalar_traits<S>::zero();
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b) {
                    const S& w = h.inverse()(a, b);
                    if (scalar_traits<S>::is_zero(w)) continue;
                    ix[slot_a - 1] = a;
                    ix[slot_b - 1] = b;
                    ix[free1 - 1] = r;
                    ix[free2 - 1] = s;
                    acc += w * t(ix[0], ix[1], ix[2], ix[3]);
                }
            out(r, s) = acc;
        }
    return out;
}

// The 1/2-alternation convention is fixed here and used consistently for
// every alternating quantity in the library.
template <class S>
TwoFormT<S> alternate_pair(const Tensor2T<S>& t) {
    const S half = scalar_traits<S>::from_fraction(1, 2);
    Tensor2T<S> r(t.dim());
    for (int i = 0; i < t.dim(); ++i)
        for (int j = 0; j < t.dim(); ++j) r(i, j) = half * (t(i, j) - t(j, i));
    for (int i = 0; i < t.dim(); ++i)
        for (int j = 0; j < i; ++j) r(i, j) = -r(j, i);
    return TwoFormT<S>::from_matrix(std::move(r));
}

template <class S>
Tensor2T<S> symmetrize_pair(const Tensor2T<S>& t) {
    const S half = scalar_traits<S>::from_fraction(1, 2);
    Tensor2T<S> r(t.dim());
    for (int i = 0; i < t.dim(); ++i)
        for (int j = 0; j < t.dim(); ++j) r(i, j) = half * (t(i, j) + t(j, i));
    return r;
}

using Scalar = Rational;
using Tensor2 = Tensor2T<Rational>;
using Tensor3 = Tensor3T<Rational>;
using Tensor4 = Tensor4T<Rational>;
using TwoForm = TwoFormT<Rational>;
using InnerProduct = InnerProductT<Rational>;

}  // namespace weylcurv
