#pragma once

#include <vector>

#include "poslab/rat_poly.hpp"
#include "poslab/roots.hpp"

namespace poslab {

/// A real algebraic number: a square-free, content-free defining polynomial
/// together with a closed bracket holding exactly one of its real roots.
class AlgebraicNumber {
 public:
  /// Throws InvalidArgument unless the bracket holds exactly one real root.
  AlgebraicNumber(const RatPoly& poly, const Rat& lo, const Rat& hi);

  const ZPoly& minpoly() const noexcept { return poly_; }
  const RootInterval& bracket() const noexcept { return bracket_; }

  /// Isolating interval of width <= tol (exact when the root is rational).
  RootInterval refined(const Rat& tol) const;

 private:
  ZPoly poly_;
  RootInterval bracket_;
};

/// Largest permitted partial quotient, in decimal digits.
inline constexpr std::size_t kMaxPartialQuotientDigits = 1'000'000;

/// The first `count` continued-fraction convergents h_0/k_0, h_1/k_1, ... of the
/// number (h_0 = floor). Computed by exact bracket refinement on the Möbius-
/// transformed polynomial; stops early when the number is rational.
std::vector<Rat> convergents(const AlgebraicNumber& a, std::size_t count);

/// Same, returning the partial quotients.
std::vector<BigInt> partial_quotients(const AlgebraicNumber& a, std::size_t count);

}  // namespace poslab
