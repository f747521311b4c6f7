#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "weylcurv/curvature.hpp"
#include "weylcurv/realization.hpp"

namespace weylcurv {

// JSON document layer. Exact rationals travel as strings ("-2/3"), indices
// are 1-based on the wire and 0-based in memory, sparse entry lists are
// emitted in sorted index order with zero entries omitted, and every
// document carries format_version "1". Emission is deterministic:
// emit(parse(emit(x))) == emit(x) byte for byte.

inline constexpr const char* kFormatVersion = "1";

CurvatureModel parse_model(std::string_view text);
std::string emit_model(const CurvatureModel& model);

// A jet document with a "connection" block is an affine jet; otherwise it is
// a Weyl jet (a pure metric jet when phi is empty) whose connection is
// derived from the metric and one-form blocks.
std::variant<WeylJet, AffineJet> parse_jet(std::string_view text);
std::string emit_jet(const WeylJet& jet);
std::string emit_jet(const AffineJet& jet);

GaugeFunction parse_gauge(std::string_view text);

std::string emit_symmetry_report(const SymmetryReport& report, int dim);
std::string emit_realization_report(const RealizationReport& report, int dim);
std::string emit_decomposition(const Tensor4& a1, const TwoForm& psi);

}  // namespace weylcurv
