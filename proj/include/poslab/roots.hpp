#pragma once

#include <optional>
#include <vector>

#include "poslab/rat_poly.hpp"

namespace poslab {

/// Closed interval [lo, hi] containing exactly one real root of the polynomial
/// it was computed for. lo == hi means the root is that rational; otherwise
/// neither endpoint is a root.
struct RootInterval {
  Rat lo;
  Rat hi;

  bool exact() const { return lo == hi; }
  Rat width() const { return hi - lo; }
  Rat midpoint() const { return (lo + hi) / 2; }
  bool operator==(const RootInterval&) const = default;
};

/// Open range for isolation; a missing endpoint is infinite.
struct Range {
  std::optional<Rat> lo;
  std::optional<Rat> hi;

  static Range positive() { return {Rat(0), std::nullopt}; }
  static Range all() { return {}; }
};

/// Default refinement tolerance, 2^-80.
Rat default_tolerance();

/// Sturm chain of a square-free integer polynomial. Each member is a positive
/// multiple of the classical negated remainder, so sign counts are unchanged.
class SturmChain {
 public:
  explicit SturmChain(const ZPoly& squarefree);

  /// Sign variations at x (zeros skipped).
  int variations(const Rat& x) const;
  int variations_at_infinity(bool positive) const;
  /// Number of distinct roots in (a, b].
  int count(const Rat& a, const Rat& b) const { return variations(a) - variations(b); }
  const ZPoly& base() const { return chain_.front(); }

 private:
  std::vector<ZPoly> chain_;
};

/// Upper bound on the modulus of every root (Cauchy), as a power of two.
Rat root_bound(const ZPoly& z);

/// Sign variations of the coefficient list; Descartes' bound on positive roots.
int descartes_variations(const ZPoly& z);
/// Descartes' bound on the number of roots in the open interval (0, c), c > 0.
int descartes_bound_zero_to(const ZPoly& z, const Rat& c);

std::vector<RootInterval> isolate_real_roots(const RatPoly& q, const Range& range = Range::all());
std::vector<RootInterval> isolate_real_roots(const ZPoly& q, const Range& range = Range::all());

/// Shrinks an isolating interval of square-free z by bisection to width <= tol.
RootInterval refine(const ZPoly& squarefree, RootInterval iv, const Rat& tol);

struct NonpositivityPoint {
  RootInterval where;
  /// q(0) <= 0: the infimum is 0 itself.
  bool at_origin = false;
};

/// inf { p > 0 : q(p) <= 0 } as a refined interval, or nullopt if q > 0 on (0, inf).
/// `cut` (optional) restricts the search to (0, cut]; roots beyond are ignored.
std::optional<NonpositivityPoint> smallest_nonpositivity_point(const RatPoly& q,
                                                               const Rat& tol = default_tolerance());
std::optional<NonpositivityPoint> smallest_nonpositivity_point(const ZPoly& q, const Rat& tol,
                                                               const std::optional<Rat>& cut = std::nullopt);

/// Exact comparison of two real algebraic numbers given as (polynomial, isolating
/// interval) pairs: -1, 0 or 1.
int compare_roots(const ZPoly& a, RootInterval ia, const ZPoly& b, RootInterval ib);

}  // namespace poslab
