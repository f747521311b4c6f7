#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "weylcurv/tensor.hpp"

namespace weylcurv {

// Identity labels, in diagnostic order. eq_1b: antisymmetry in the first
// pair. eq_1c: first Bianchi identity. eq_1d: the Weyl pair symmetry tying
// the last-pair symmetrization to the alternating Ricci part. eq_1e:
// antisymmetry in the last pair. eq_1f: pair interchange.

template <class S>
Tensor4T<S> residual_antisym12(const Tensor4T<S>& t) {
    const int n = t.dim();
    Tensor4T<S> r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) r(i, j, k, l) = t(i, j, k, l) + t(j, i, k, l);
    return r;
}

template <class S>
Tensor4T<S> residual_bianchi(const Tensor4T<S>& t) {
    const int n = t.dim();
    Tensor4T<S> r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    r(i, j, k, l) = t(i, j, k, l) + t(j, k, i, l) + t(k, i, j, l);
    return r;
}

template <class S>
Tensor4T<S> residual_pair_antisym34(const Tensor4T<S>& t) {
    const int n = t.dim();
    Tensor4T<S> r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) r(i, j, k, l) = t(i, j, k, l) + t(i, j, l, k);
    return r;
}

template <class S>
Tensor4T<S> residual_interchange(const Tensor4T<S>& t) {
    const int n = t.dim();
    Tensor4T<S> r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) r(i, j, k, l) = t(i, j, k, l) - t(k, l, i, j);
    return r;
}

// Ricci contraction rho_{jk} = h^{il} A_{ijkl} (slots 1 and 4).
template <class S>
Tensor2T<S> ricci(const Tensor4T<S>& t, const InnerProductT<S>& h) {
    return contract(t, h, 1, 4);
}

// Conjugate Ricci rho*_{jk} = h^{il} A_{jilk} (slots 2 and 3). In an
// orthonormal basis this reduces to the basis sum with the metric signs
// absorbed into h^{il}.
template <class S>
Tensor2T<S> ricci_star(const Tensor4T<S>& t, const InnerProductT<S>& h) {
    return contract(t, h, 2, 3);
}

template <class S>
TwoFormT<S> alt_ricci(const Tensor4T<S>& t, const InnerProductT<S>& h) {
    return alternate_pair(ricci(t, h));
}

template <class S>
Tensor2T<S> sym_ricci(const Tensor4T<S>& t, const InnerProductT<S>& h) {
    return symmetrize_pair(ricci(t, h));
}

template <class S>
Tensor4T<S> residual_weyl(const Tensor4T<S>& t, const InnerProductT<S>& h) {
    if (t.dim() != h.dim()) throw DimensionError("tensor/inner product dimension mismatch");
    const int n = t.dim();
    Tensor2T<S> rho = ricci(t, h);
    const S two_over_n = scalar_traits<S>::from_fraction(2, n);
    Tensor4T<S> r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            S rho_anti = two_over_n * (rho(j, i) - rho(i, j));
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    r(i, j, k, l) =
                        t(i, j, k, l) + t(i, j, l, k) - rho_anti * h.matrix()(k, l);
        }
    return r;
}

// The five-term map from two-forms into the Weyl class:
// sigma(psi)(x,y,z,w) = 2 psi(x,y) h(z,w) + psi(x,z) h(y,w) - psi(y,z) h(x,w)
//                       - psi(x,w) h(y,z) + psi(y,w) h(x,z).
template <class S>
Tensor4T<S> sigma(const TwoFormT<S>& psi, const InnerProductT<S>& h) {
    if (psi.dim() != h.dim()) throw DimensionError("two-form/inner product dimension mismatch");
    const int n = h.dim();
    const auto& e = h.matrix();
    const S two = scalar_traits<S>::from_fraction(2, 1);
    Tensor4T<S> r(n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                for (int w = 0; w < n; ++w)
                    r(x, y, z, w) = two * psi(x, y) * e(z, w) + psi(x, z) * e(y, w) -
                                    psi(y, z) * e(x, w) - psi(x, w) * e(y, z) +
                                    psi(y, w) * e(x, z);
    return r;
}

// Conjugate tensor: sign-flipped swap of the last two slots.
template <class S>
Tensor4T<S> conjugate(const Tensor4T<S>& t) {
    const int n = t.dim();
    Tensor4T<S> r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) r(i, j, k, l) = -t(i, j, l, k);
    return r;
}

// S(A) = half the last-pair symmetrization residual.
template <class S>
Tensor4T<S> symmetrize_last(const Tensor4T<S>& t) {
    Tensor4T<S> r = residual_pair_antisym34(t);
    r *= scalar_traits<S>::from_fraction(1, 2);
    return r;
}

struct ClassFlags {
    bool in_R = false;
    bool in_W = false;
    bool in_A = false;

    friend bool operator==(const ClassFlags&, const ClassFlags&) = default;
};

// Per-identity maximum absolute residual entries plus the derived class
// flags. Zero means exactly zero in exact mode, within tolerance in floating
// mode.
template <class S>
struct SymmetryReportT {
    S eq_1b{};
    S eq_1c{};
    S eq_1d{};
    S eq_1e{};
    S eq_1f{};
    bool in_R = false;
    bool in_W = false;
    bool in_A = false;

    ClassFlags flags() const { return {in_R, in_W, in_A}; }

    // First violated identity in the order 1b, 1c, 1d, 1e, or nullptr.
    const char* violated() const {
        if (!scalar_traits<S>::is_zero(eq_1b)) return "eq_1b";
        if (!scalar_traits<S>::is_zero(eq_1c)) return "eq_1c";
        if (!scalar_traits<S>::is_zero(eq_1d)) return "eq_1d";
        if (!scalar_traits<S>::is_zero(eq_1e)) return "eq_1e";
        return nullptr;
    }
};

template <class S>
SymmetryReportT<S> symmetry_report(const Tensor4T<S>& t, const InnerProductT<S>& h) {
    if (t.dim() != h.dim()) throw DimensionError("tensor/inner product dimension mismatch");
    SymmetryReportT<S> rep;
    rep.eq_1b = max_abs(residual_antisym12(t));
    rep.eq_1c = max_abs(residual_bianchi(t));
    rep.eq_1d = max_abs(residual_weyl(t, h));
    rep.eq_1e = max_abs(residual_pair_antisym34(t));
    rep.eq_1f = max_abs(residual_interchange(t));
    const bool z1b = scalar_traits<S>::is_zero(rep.eq_1b);
    const bool z1c = scalar_traits<S>::is_zero(rep.eq_1c);
    rep.in_R = z1b && z1c;
    rep.in_W = rep.in_R && scalar_traits<S>::is_zero(rep.eq_1d);
    rep.in_A = rep.in_R && scalar_traits<S>::is_zero(rep.eq_1e);
    return rep;
}

template <class S>
ClassFlags classify(const Tensor4T<S>& t, const InnerProductT<S>& h) {
    return symmetry_report(t, h).flags();
}

namespace detail {

// ClassError naming the first violated identity among the ones a given
// operation requires.
template <class S>
[[noreturn]] void throw_class_error(const SymmetryReportT<S>& rep,
                                    std::initializer_list<const char*> required,
                                    const std::string& need) {
    for (const char* eq : required) {
        const S* res = nullptr;
        if (std::string(eq) == "eq_1b") res = &rep.eq_1b;
        else if (std::string(eq) == "eq_1c") res = &rep.eq_1c;
        else if (std::string(eq) == "eq_1d") res = &rep.eq_1d;
        else if (std::string(eq) == "eq_1e") res = &rep.eq_1e;
        if (res != nullptr && !scalar_traits<S>::is_zero(*res))
            throw ClassError(eq, need + " (violates " + eq + ")");
    }
    throw ClassError("", need);
}

}  // namespace detail

// The triple (dimension, inner product, rank-4 tensor). Class flags are
// computed eagerly so the cached record always matches classify().
template <class S>
class CurvatureModelT {
public:
    CurvatureModelT() = default;
    CurvatureModelT(InnerProductT<S> h, Tensor4T<S> tensor)
        : h_(std::move(h)), a_(std::move(tensor)) {
        if (a_.dim() != h_.dim())
            throw DimensionError("model tensor/inner product dimension mismatch");
        check_dimension(h_.dim());
        flags_ = classify(a_, h_);
    }

    int dim() const { return h_.dim(); }
    const InnerProductT<S>& h() const { return h_; }
    const Tensor4T<S>& tensor() const { return a_; }
    const ClassFlags& flags() const { return flags_; }

    friend bool operator==(const CurvatureModelT&, const CurvatureModelT&) = default;

private:
    InnerProductT<S> h_;
    Tensor4T<S> a_;
    ClassFlags flags_;
};

// Splits a Weyl generalized curvature tensor as A = A1 + sigma(psi) with
// A1 algebraic and psi = -(1/n) * altRic(A). The splitting is exact and
// idempotent: decomposing A1 again returns psi = 0.
template <class S>
std::pair<Tensor4T<S>, TwoFormT<S>> higa_decompose(const CurvatureModelT<S>& model) {
    auto rep = symmetry_report(model.tensor(), model.h());
    if (!rep.in_W)
        detail::throw_class_error(rep, {"eq_1b", "eq_1c", "eq_1d"},
                                  "tensor is not a Weyl generalized curvature tensor");
    const int n = model.dim();
    TwoFormT<S> psi = scalar_traits<S>::from_fraction(-1, n) *
                      alt_ricci(model.tensor(), model.h());
    Tensor4T<S> a1 = model.tensor() - sigma(psi, model.h());
    return {std::move(a1), std::move(psi)};
}

// Closed form of the Bianchi residual of conjugate(sigma(psi)):
// -4 [ psi(x,y) h(w,z) + psi(y,z) h(w,x) + psi(z,x) h(w,y) ].
template <class S>
Tensor4T<S> conjugate_bianchi_residual_closed_form(const TwoFormT<S>& psi,
                                                   const InnerProductT<S>& h) {
    if (psi.dim() != h.dim()) throw DimensionError("two-form/inner product dimension mismatch");
    const int n = h.dim();
    const auto& e = h.matrix();
    const S minus4 = scalar_traits<S>::from_fraction(-4, 1);
    Tensor4T<S> r(n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                for (int w = 0; w < n; ++w)
                    r(x, y, z, w) = minus4 * (psi(x, y) * e(w, z) + psi(y, z) * e(w, x) +
                                              psi(z, x) * e(w, y));
    return r;
}

template <class S>
struct EinsteinWeylResult {
    bool is_einstein_weyl = false;
    std::optional<S> factor;
};

// True when the symmetrized Ricci tensor is a scalar multiple of h; the
// candidate factor is the trace ratio.
template <class S>
EinsteinWeylResult<S> is_einstein_weyl(const CurvatureModelT<S>& model) {
    const int n = model.dim();
    Tensor2T<S> sr = sym_ricci(model.tensor(), model.h());
    S tr = scalar_traits<S>::zero();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) tr += model.h().inverse()(i, j) * sr(i, j);
    S c = tr / scalar_traits<S>::from_fraction(n, 1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (!scalar_traits<S>::is_zero(sr(i, j) - c * model.h().matrix()(i, j)))
                return {false, std::nullopt};
    return {true, std::move(c)};
}

enum class TensorClass {
    GeneralizedCurvature,  // identities 1b, 1c
    WeylCurvature,         // identities 1b, 1c, 1d
    AlgebraicCurvature,    // identities 1b, 1c, 1e
};

namespace detail {

inline int draw_small_int(std::mt19937_64& g) {
    // mt19937_64's output sequence is pinned by the standard, so this stays
    // deterministic across platforms; entries land in [-4, 4].
    return static_cast<int>(g() % 9) - 4;
}

inline Tensor4 draw_raw_tensor4(int n, std::mt19937_64& g) {
    Tensor4 t(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) t(i, j, k, l) = Rational(draw_small_int(g));
    return t;
}

inline TwoForm draw_two_form(int n, std::mt19937_64& g) {
    TwoForm psi(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) psi.set(i, j, Rational(draw_small_int(g)));
    return psi;
}

inline Tensor4 antisymmetrize_12(const Tensor4& t) {
    const int n = t.dim();
    const Rational half(1, 2);
    Tensor4 r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    r(i, j, k, l) = half * (t(i, j, k, l) - t(j, i, k, l));
    return r;
}

inline Tensor4 antisymmetrize_34(const Tensor4& t) {
    const int n = t.dim();
    const Rational half(1, 2);
    Tensor4 r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    r(i, j, k, l) = half * (t(i, j, k, l) - t(i, j, l, k));
    return r;
}

inline Tensor4 symmetrize_pair_exchange(const Tensor4& t) {
    const int n = t.dim();
    const Rational half(1, 2);
    Tensor4 r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    r(i, j, k, l) = half * (t(i, j, k, l) + t(k, l, i, j));
    return r;
}

// B(A) = A - (1/3) * cyclic sum over the first three slots. Kills the
// Bianchi residual and preserves the pair symmetries.
inline Tensor4 bianchi_project(const Tensor4& t) {
    Tensor4 cyc = residual_bianchi(t);
    cyc *= Rational(1, 3);
    return t - cyc;
}

inline Tensor4 draw_algebraic(int n, std::mt19937_64& g) {
    Tensor4 t = draw_raw_tensor4(n, g);
    t = antisymmetrize_12(t);
    t = antisymmetrize_34(t);
    t = symmetrize_pair_exchange(t);
    return bianchi_project(t);
}

inline Tensor4 draw_generalized(int n, std::mt19937_64& g) {
    Tensor4 t = draw_raw_tensor4(n, g);
    t = antisymmetrize_12(t);
    return bianchi_project(t);
}

}  // namespace detail

inline TwoForm random_two_form(int n, std::uint64_t seed) {
    check_dimension(n);
    std::mt19937_64 g(seed);
    return detail::draw_two_form(n, g);
}

// Deterministic in (cls, n, seed). The construction is checked by classify
// before the tensor is handed out.
inline Tensor4 random_in_class(TensorClass cls, int n, const InnerProduct& h,
                               std::uint64_t seed) {
    if (n != h.dim()) throw DimensionError("requested dimension does not match inner product");
    std::mt19937_64 g(seed);
    Tensor4 out;
    switch (cls) {
        case TensorClass::AlgebraicCurvature:
            out = detail::draw_algebraic(n, g);
            break;
        case TensorClass::WeylCurvature: {
            Tensor4 a1 = detail::draw_algebraic(n, g);
            TwoForm psi = detail::draw_two_form(n, g);
            out = a1 + sigma(psi, h);
            break;
        }
        case TensorClass::GeneralizedCurvature:
            out = detail::draw_generalized(n, g);
            break;
    }
    ClassFlags f = classify(out, h);
    const bool ok = cls == TensorClass::AlgebraicCurvature  ? f.in_A
                    : cls == TensorClass::WeylCurvature     ? f.in_W
                                                            : f.in_R;
    if (!ok) throw Error("class generator postcondition failed");
    return out;
}

using SymmetryReport = SymmetryReportT<Rational>;
using CurvatureModel = CurvatureModelT<Rational>;

}  // namespace weylcurv
