#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "weylcurv/curvature.hpp"
#include "weylcurv/tensor.hpp"

namespace weylcurv {

// Truncated polynomial jets around the origin, carrying exactly the data
// that determines curvature there.
//
// Storage conventions, fixed across the module:
//   * metric      g_ij(x)  = eps_ij + sum_a lin(a,i,j) x^a
//                            + sum_{a,b} quad(a,b,i,j) x^a x^b
//     with quad symmetric in (a,b) and (i,j); the monomial x^a x^b (a != b)
//     therefore carries the coefficient 2*quad(a,b,i,j).
//   * one-form    phi_i(x) = constant[i] + sum_a coeff(a,i) x^a
//   * connection  Gamma_{jkl}(x) = constant(j,k,l) + sum_a linear(a,j,k,l) x^a
//     with indices lowered via the constant background eps; raising always
//     uses eps as well, never the position-dependent metric.
//
// Jets produced by the realization constructions have lin = 0, phi(0) = 0 and
// Gamma(0) = 0; gauge transforms populate the extra blocks.

template <class S>
struct MetricJetT {
    InnerProductT<S> constant;
    Tensor3T<S> linear;
    Tensor4T<S> quad;

    int dim() const { return constant.dim(); }

    friend bool operator==(const MetricJetT&, const MetricJetT&) = default;
};

template <class S>
struct OneFormJetT {
    std::vector<S> constant;
    Tensor2T<S> coeff;  // coeff(a,i): coefficient of x^a in phi_i

    int dim() const { return coeff.dim(); }

    friend bool operator==(const OneFormJetT&, const OneFormJetT&) = default;
};

template <class S>
struct ConnectionJetT {
    InnerProductT<S> background;
    Tensor3T<S> constant;  // Gamma(0)_{jkl}
    Tensor4T<S> linear;    // linear(a,j,k,l)

    int dim() const { return background.dim(); }

    friend bool operator==(const ConnectionJetT&, const ConnectionJetT&) = default;

    friend ConnectionJetT operator+(ConnectionJetT a, const ConnectionJetT& b) {
        a.constant += b.constant;
        a.linear += b.linear;
        return a;
    }
};

// Gauge generator f with f(0) = 0: f(x) = sum_a linear[a] x^a
// + sum_{a,b} quad(a,b) x^a x^b, quad symmetric.
template <class S>
struct GaugeFunctionT {
    std::vector<S> linear;
    Tensor2T<S> quad;

    int dim() const { return quad.dim(); }

    friend bool operator==(const GaugeFunctionT&, const GaugeFunctionT&) = default;
};

template <class S>
struct WeylJetT {
    MetricJetT<S> metric;
    OneFormJetT<S> phi;
    ConnectionJetT<S> conn;
    CurvatureModelT<S> model;

    int dim() const { return metric.dim(); }

    friend bool operator==(const WeylJetT&, const WeylJetT&) = default;
};

// A bare torsion-free connection jet with the model it realizes; there is no
// metric compatibility to speak of, only curvature and torsion.
template <class S>
struct AffineJetT {
    ConnectionJetT<S> conn;
    CurvatureModelT<S> model;

    int dim() const { return conn.dim(); }

    friend bool operator==(const AffineJetT&, const AffineJetT&) = default;
};

template <class S>
struct RealizationReportT {
    Tensor4T<S> curvature_at_origin;
    Tensor4T<S> target;
    S max_abs_difference{};
    std::optional<S> compatibility_max;  // absent for affine jets
    S torsion_max{};
    std::optional<S> dphi_check;  // absent for affine jets
    bool success = false;
};

template <class S>
MetricJetT<S> flat_metric_jet(const InnerProductT<S>& h) {
    return {h, Tensor3T<S>(h.dim()), Tensor4T<S>(h.dim())};
}

template <class S>
OneFormJetT<S> zero_one_form_jet(int n) {
    return {std::vector<S>(static_cast<std::size_t>(n), scalar_traits<S>::zero()),
            Tensor2T<S>(n)};
}

namespace detail {

// Raises the last index of a rank-3 coefficient block with eps^{-1}.
template <class S>
Tensor3T<S> raise_last(const Tensor3T<S>& t, const InnerProductT<S>& h) {
    const int n = t.dim();
    Tensor3T<S> up(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int b = 0; b < n; ++b) {
                S acc = scalar_traits<S>::zero();
                for (int s = 0; s < n; ++s) acc += h.inverse()(b, s) * t(i, j, s);
                up(i, j, b) = acc;
            }
    return up;
}

template <class S>
bool all_zero(const Tensor3T<S>& t) {
    return scalar_traits<S>::is_zero(max_abs(t));
}

}  // namespace detail

// Levi-Civita Christoffel jet of a quadratic metric jet, eps-lowered.
// The g-lowered symbols are half the cyclic derivative combination; when the
// metric carries a linear block, re-lowering by the constant eps picks up a
// first-order correction from the inverse metric's linear term.
template <class S>
ConnectionJetT<S> levi_civita_christoffels(const MetricJetT<S>& m) {
    const int n = m.dim();
    const S half = scalar_traits<S>::from_fraction(1, 2);
    ConnectionJetT<S> c{m.constant, Tensor3T<S>(n), Tensor4T<S>(n)};

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                c.constant(i, j, k) =
                    half * (m.linear(i, j, k) + m.linear(j, i, k) - m.linear(k, i, j));

    for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    c.linear(a, i, j, k) =
                        m.quad(a, i, j, k) + m.quad(a, j, i, k) - m.quad(a, k, i, j);

    if (!detail::all_zero(m.linear) && !detail::all_zero(c.constant)) {
        Tensor3T<S> up0 = detail::raise_last(c.constant, m.constant);
        for (int a = 0; a < n; ++a)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k) {
                        S acc = scalar_traits<S>::zero();
                        for (int b = 0; b < n; ++b) acc += m.linear(a, k, b) * up0(i, j, b);
                        c.linear(a, i, j, k) -= acc;
                    }
    }
    return c;
}

// alpha_{ijk} = phi_i g_{jk} + phi_j g_{ik} - phi_k g_{ij}, truncated to
// degree 1 and eps-lowered. For jets with phi(0) = 0 and no metric linear
// block this is just phi_i(x) eps_jk + phi_j(x) eps_ik - phi_k(x) eps_ij.
template <class S>
ConnectionJetT<S> weyl_alpha(const OneFormJetT<S>& phi, const MetricJetT<S>& m) {
    if (phi.dim() != m.dim()) throw DimensionError("one-form/metric dimension mismatch");
    const int n = m.dim();
    const auto& e = m.constant.matrix();
    ConnectionJetT<S> c{m.constant, Tensor3T<S>(n), Tensor4T<S>(n)};

    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                c.constant(i, j, k) = phi.constant[i] * e(j, k) + phi.constant[j] * e(i, k) -
                                      phi.constant[k] * e(i, j);

    for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    c.linear(a, i, j, k) =
                        phi.coeff(a, i) * e(j, k) + phi.constant[i] * m.linear(a, j, k) +
                        phi.coeff(a, j) * e(i, k) + phi.constant[j] * m.linear(a, i, k) -
                        phi.coeff(a, k) * e(i, j) - phi.constant[k] * m.linear(a, i, j);

    if (!detail::all_zero(m.linear) && !detail::all_zero(c.constant)) {
        Tensor3T<S> up0 = detail::raise_last(c.constant, m.constant);
        for (int a = 0; a < n; ++a)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k) {
                        S acc = scalar_traits<S>::zero();
                        for (int b = 0; b < n; ++b) acc += m.linear(a, k, b) * up0(i, j, b);
                        c.linear(a, i, j, k) -= acc;
                    }
    }
    return c;
}

// R_{ijkl}(0) = d_i Gamma_{jkl} - d_j Gamma_{ikl}
//               + eps^{rs} (Gamma_{irl} Gamma_{jks} - Gamma_{jrl} Gamma_{iks})(0).
// The quadratic term only contributes when Gamma(0) != 0, but it is always
// evaluated.
template <class S>
Tensor4T<S> curvature_at_origin(const ConnectionJetT<S>& c) {
    const int n = c.dim();
    Tensor4T<S> r(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    r(i, j, k, l) = c.linear(i, j, k, l) - c.linear(j, i, k, l);
    if (!detail::all_zero(c.constant)) {
        const auto& inv = c.background.inverse();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    for (int l = 0; l < n; ++l) {
                        S acc = scalar_traits<S>::zero();
                        for (int rr = 0; rr < n; ++rr)
                            for (int s = 0; s < n; ++s) {
                                const S& w = inv(rr, s);
                                if (scalar_traits<S>::is_zero(w)) continue;
                                acc += w * (c.constant(i, rr, l) * c.constant(j, k, s) -
                                            c.constant(j, rr, l) * c.constant(i, k, s));
                            }
                        r(i, j, k, l) += acc;
                    }
    }
    return r;
}

// Ansatz coefficients for the two realization constructions. Both are pinned
// by the calibration suite, which round-trips random tensors through
// curvature_at_origin; do not change them without re-running it.
//   * metric quad(a,b,i,j) = 1/6 (A(a,i,b,j) + A(b,i,a,j)); in monomial form
//     the cross terms x^a x^b carry 1/3 (A(a,i,b,j) + A(b,i,a,j)).
//   * affine linear(a,j,k,l) = 1/3 (A(a,j,k,l) + A(a,k,j,l)).
inline constexpr long kMetricAnsatzNum = 1;
inline constexpr long kMetricAnsatzDen = 6;
inline constexpr long kAffineAnsatzNum = 1;
inline constexpr long kAffineAnsatzDen = 3;

// Quadratic metric jet whose Levi-Civita curvature at the origin is the given
// algebraic curvature tensor.
template <class S>
MetricJetT<S> riemann_realize(const Tensor4T<S>& a1, const InnerProductT<S>& h) {
    auto rep = symmetry_report(a1, h);
    if (!rep.in_A)
        detail::throw_class_error(rep, {"eq_1b", "eq_1c", "eq_1e"},
                                  "tensor is not an algebraic curvature tensor");
    const int n = h.dim();
    const S c1 = scalar_traits<S>::from_fraction(kMetricAnsatzNum, kMetricAnsatzDen);
    MetricJetT<S> m = flat_metric_jet(h);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    m.quad(a, b, i, j) = c1 * (a1(a, i, b, j) + a1(b, i, a, j));
    return m;
}

// Linear connection jet whose curvature at the origin is the given
// generalized curvature tensor; h is only the lowering background.
template <class S>
ConnectionJetT<S> affine_realize(const Tensor4T<S>& a, const InnerProductT<S>& h) {
    auto rep = symmetry_report(a, h);
    if (!rep.in_R)
        detail::throw_class_error(rep, {"eq_1b", "eq_1c"},
                                  "tensor is not a generalized curvature tensor");
    const int n = h.dim();
    const S c2 = scalar_traits<S>::from_fraction(kAffineAnsatzNum, kAffineAnsatzDen);
    ConnectionJetT<S> c{h, Tensor3T<S>(n), Tensor4T<S>(n)};
    for (int x = 0; x < n; ++x)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    c.linear(x, j, k, l) = c2 * (a(x, j, k, l) + a(x, k, j, l));
    return c;
}

// Realizes a Weyl curvature model: split A = A1 + sigma(psi), realize A1 by
// a metric jet, take phi with coefficients coeff(a,i) = psi(a,i), and form
// Gamma = Gamma^g + alpha. The phi sign convention is pinned by the dphi
// consistency check in the calibration suite.
template <class S>
WeylJetT<S> weyl_realize(const CurvatureModelT<S>& model) {
    auto rep = symmetry_report(model.tensor(), model.h());
    if (!rep.in_W)
        detail::throw_class_error(rep, {"eq_1b", "eq_1c", "eq_1d"},
                                  "tensor is not a Weyl generalized curvature tensor");
    auto [a1, psi] = higa_decompose(model);
    const int n = model.dim();
    MetricJetT<S> metric = riemann_realize(a1, model.h());
    OneFormJetT<S> phi = zero_one_form_jet<S>(n);
    for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i) phi.coeff(a, i) = psi(a, i);
    ConnectionJetT<S> conn = levi_civita_christoffels(metric) + weyl_alpha(phi, metric);
    return {std::move(metric), std::move(phi), std::move(conn), model};
}

template <class S>
S torsion_residual(const ConnectionJetT<S>& c) {
    const int n = c.dim();
    S m = scalar_traits<S>::zero();
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                S a = scalar_traits<S>::abs_value(c.constant(j, k, l) - c.constant(k, j, l));
                if (m < a) m = a;
                for (int x = 0; x < n; ++x) {
                    S b = scalar_traits<S>::abs_value(c.linear(x, j, k, l) -
                                                      c.linear(x, k, j, l));
                    if (m < b) m = b;
                }
            }
    return m;
}

// Maximum absolute coefficient of (nabla g + 2 phi (x) g) through polynomial
// degree 1. All products keep the full truncated metric so the residual
// stays exactly zero across gauge transforms.
template <class S>
S compatibility_residual(const WeylJetT<S>& j) {
    const int n = j.dim();
    const auto& m = j.metric;
    const auto& c = j.conn;
    const auto& phi = j.phi;
    const auto& e = m.constant.matrix();
    const S two = scalar_traits<S>::from_fraction(2, 1);

    Tensor3T<S> up0 = detail::raise_last(c.constant, m.constant);

    S worst = scalar_traits<S>::zero();
    auto consider = [&worst](const S& v) {
        S a = scalar_traits<S>::abs_value(v);
        if (worst < a) worst = a;
    };

    for (int i = 0; i < n; ++i)
        for (int jj = 0; jj < n; ++jj)
            for (int k = 0; k < n; ++k) {
                consider(m.linear(i, jj, k) - c.constant(i, jj, k) - c.constant(i, k, jj) +
                         two * phi.constant[i] * e(jj, k));
                for (int a = 0; a < n; ++a) {
                    S gamma_j = c.linear(a, i, jj, k);
                    S gamma_k = c.linear(a, i, k, jj);
                    for (int b = 0; b < n; ++b) {
                        gamma_j += up0(i, jj, b) * m.linear(a, b, k);
                        gamma_k += up0(i, k, b) * m.linear(a, b, jj);
                    }
                    consider(two * m.quad(i, a, jj, k) - gamma_j - gamma_k +
                             two * (phi.coeff(a, i) * e(jj, k) +
                                    phi.constant[i] * m.linear(a, jj, k)));
                }
            }
    return worst;
}

// (dphi)(j,k) = 1/2 (d_j phi_k - d_k phi_j), the same 1/2-alternation
// convention as alt_ricci.
template <class S>
TwoFormT<S> dphi(const OneFormJetT<S>& phi) {
    const int n = phi.dim();
    const S half = scalar_traits<S>::from_fraction(1, 2);
    TwoFormT<S> d(n);
    for (int j = 0; j < n; ++j)
        for (int k = j + 1; k < n; ++k) d.set(j, k, half * (phi.coeff(j, k) - phi.coeff(k, j)));
    return d;
}

template <class S>
RealizationReportT<S> verify_realization(const WeylJetT<S>& j) {
    const int n = j.dim();
    RealizationReportT<S> rep;
    rep.curvature_at_origin = curvature_at_origin(j.conn);
    rep.target = j.model.tensor();
    rep.max_abs_difference = max_abs(rep.curvature_at_origin - rep.target);
    rep.compatibility_max = compatibility_residual(j);
    rep.torsion_max = torsion_residual(j.conn);

    // dphi must equal -(1/n) altRic of the realized curvature.
    TwoFormT<S> lam = alt_ricci(rep.curvature_at_origin, j.model.h());
    Tensor2T<S> diff = dphi(j.phi).matrix();
    diff += scalar_traits<S>::from_fraction(1, n) * lam.matrix();
    rep.dphi_check = max_abs(diff);

    rep.success = scalar_traits<S>::is_zero(rep.max_abs_difference) &&
                  scalar_traits<S>::is_zero(*rep.compatibility_max) &&
                  scalar_traits<S>::is_zero(rep.torsion_max) &&
                  scalar_traits<S>::is_zero(*rep.dphi_check);
    return rep;
}

template <class S>
RealizationReportT<S> verify_realization(const AffineJetT<S>& j) {
    RealizationReportT<S> rep;
    rep.curvature_at_origin = curvature_at_origin(j.conn);
    rep.target = j.model.tensor();
    rep.max_abs_difference = max_abs(rep.curvature_at_origin - rep.target);
    rep.torsion_max = torsion_residual(j.conn);
    rep.success = scalar_traits<S>::is_zero(rep.max_abs_difference) &&
                  scalar_traits<S>::is_zero(rep.torsion_max);
    return rep;
}

// Gauge transformation (g, phi) -> (e^{2f} g, phi - df) on truncated jets.
// e^{2f} is expanded as 1 + 2f + 2f^2 and truncated to the terms that reach
// metric degree 2. The connection is unchanged.
template <class S>
WeylJetT<S> gauge_transform(const WeylJetT<S>& j, const GaugeFunctionT<S>& f) {
    const int n = j.dim();
    if (f.dim() != n || static_cast<int>(f.linear.size()) != n)
        throw DimensionError("gauge function dimension mismatch");
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            if (!scalar_traits<S>::is_zero(f.quad(a, b) - f.quad(b, a)))
                throw ShapeError("gauge function quadratic part is not symmetric");

    const auto& e = j.metric.constant.matrix();
    const S two = scalar_traits<S>::from_fraction(2, 1);
    const S half = scalar_traits<S>::from_fraction(1, 2);

    WeylJetT<S> out = j;
    for (int a = 0; a < n; ++a) {
        S e1 = two * f.linear[a];
        for (int i = 0; i < n; ++i)
            for (int jj = 0; jj < n; ++jj) out.metric.linear(a, i, jj) += e1 * e(i, jj);
    }
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            S e2 = two * f.quad(a, b) + two * f.linear[a] * f.linear[b];
            S e1a = two * f.linear[a];
            S e1b = two * f.linear[b];
            for (int i = 0; i < n; ++i)
                for (int jj = 0; jj < n; ++jj)
                    out.metric.quad(a, b, i, jj) +=
                        e2 * e(i, jj) + half * (e1a * j.metric.linear(b, i, jj) +
                                               e1b * j.metric.linear(a, i, jj));
        }
    for (int i = 0; i < n; ++i) out.phi.constant[i] -= f.linear[i];
    for (int a = 0; a < n; ++a)
        for (int i = 0; i < n; ++i) out.phi.coeff(a, i) -= two * f.quad(a, i);
    return out;
}

using MetricJet = MetricJetT<Rational>;
using OneFormJet = OneFormJetT<Rational>;
using ConnectionJet = ConnectionJetT<Rational>;
using GaugeFunction = GaugeFunctionT<Rational>;
using WeylJet = WeylJetT<Rational>;
using AffineJet = AffineJetT<Rational>;
using RealizationReport = RealizationReportT<Rational>;

}  // namespace weylcurv
