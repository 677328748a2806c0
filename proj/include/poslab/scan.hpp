#pragma once

#include <optional>
#include <vector>

#include "poslab/roots.hpp"
#include "poslab/series.hpp"

namespace poslab {

/// Empirical upper bound on p_max over a degree box.
struct PBound {
  /// Smallest positive nonpositivity point over all cells; empty if none.
  std::optional<RootInterval> bound;
  /// Cell attaining the minimum (lexicographically smallest on ties).
  Exponent witness;
  /// Coefficient polynomial of the witness cell.
  ParamPoly witness_poly;
  std::size_t cells_scanned = 0;
  /// Some cell has c(0) <= 0, so the bound is 0 itself.
  bool at_origin = false;
};

struct ScanOptions {
  ExpandOptions expand;
  Rat tolerance = default_tolerance();
};

/// Scans the coefficient polynomials of T_p f for the symbolic p. `f` must not
/// depend on p.
PBound pmax_upper_bound(const RatFun& f, const DegreeBox& box, const ScanOptions& opts = {});
/// Same scan on a function that already carries the symbolic parameter.
PBound pmax_upper_bound_of_transformed(const RatFun& tf, const DegreeBox& box, const ScanOptions& opts = {});

/// PBound per box; boxes must be nested and ascending. Throws std::logic_error
/// if a larger box ever reports a larger bound.
std::vector<PBound> bound_vs_box_profile(const RatFun& f, const std::vector<DegreeBox>& boxes,
                                         const ScanOptions& opts = {});

/// -1, 0, 1 comparing the bounds (an absent bound counts as +infinity).
int compare_bounds(const PBound& a, const PBound& b);

enum class ScanStrategy { IntervalFirst, ExactOnly };

struct ScanReport {
  bool all_positive = true;
  /// First failing cell in row-major order, verified exactly.
  std::optional<Exponent> witness;
  Rat witness_value;
  Rat p;
  DegreeBox box;
  std::size_t cells_scanned = 0;
  std::size_t interval_cells = 0;
  std::size_t escalations = 0;
};

/// Checks every coefficient of T_p f on the box for positivity at a fixed p > 0.
/// Interval-first escalates a cell to exact arithmetic when its enclosure
/// contains 0 or is relatively wider than 2^-10.
ScanReport positivity_at(const RatFun& f, const Rat& p, const DegreeBox& box,
                         ScanStrategy strategy = ScanStrategy::IntervalFirst, const ExpandOptions& opts = {});

inline constexpr double kEscalationWidth = 1.0 / 1024;

}  // namespace poslab
