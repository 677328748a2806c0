#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "poslab/rat.hpp"

namespace poslab {

/// Dense univariate polynomial with rational coefficients, ascending degree.
/// Trailing zeros are stripped on every mutation, so the zero polynomial is
/// the empty coefficient list and `degree()` is -1 for it.
class RatPoly {
 public:
  RatPoly() = default;
  explicit RatPoly(std::vector<Rat> coeffs);
  RatPoly(std::initializer_list<Rat> coeffs) : RatPoly(std::vector<Rat>(coeffs)) {}

  static RatPoly constant(const Rat& c);
  static RatPoly monomial(const Rat& c, std::size_t degree);
  /// The polynomial `x` (the indeterminate itself).
  static RatPoly identity() { return monomial(Rat(1), 1); }

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  bool is_constant() const noexcept { return coeffs_.size() <= 1; }
  std::size_t size() const noexcept { return coeffs_.size(); }

  /// Coefficient of x^i; zero past the degree.
  Rat coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Rat(0); }
  const std::vector<Rat>& coeffs() const noexcept { return coeffs_; }
  const Rat& leading() const;

  Rat operator()(const Rat& x) const;

  RatPoly& operator+=(const RatPoly& other);
  RatPoly& operator-=(const RatPoly& other);
  RatPoly& operator*=(const RatPoly& other);
  RatPoly& operator*=(const Rat& scalar);

  friend RatPoly operator+(RatPoly a, const RatPoly& b) { return a += b; }
  friend RatPoly operator-(RatPoly a, const RatPoly& b) { return a -= b; }
  friend RatPoly operator*(const RatPoly& a, const RatPoly& b);
  friend RatPoly operator*(RatPoly a, const Rat& s) { return a *= s; }
  friend RatPoly operator*(const Rat& s, RatPoly a) { return a *= s; }
  friend RatPoly operator-(RatPoly a);
  friend bool operator==(const RatPoly& a, const RatPoly& b) { return a.coeffs_ == b.coeffs_; }

  /// Human-readable, ascending order, parseable by the expression grammar.
  std::string to_string(std::string_view var = "p") const;

 private:
  void trim();
  std::vector<Rat> coeffs_;
};

/// Polynomial in the transform parameter p.
using ParamPoly = RatPoly;

/// Integer polynomial, ascending degree; the working type of root isolation.
using ZPoly = std::vector<BigInt>;

RatPoly derivative(const RatPoly& q);
RatPoly pow(const RatPoly& q, unsigned e);
/// Euclidean division over Q; throws ZeroPolynomial for b == 0.
std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b);
RatPoly rem(const RatPoly& a, const RatPoly& b);
/// Monic gcd (zero if both are zero).
RatPoly gcd(const RatPoly& a, const RatPoly& b);
RatPoly squarefree_part(const RatPoly& q);
/// q(x + shift).
RatPoly taylor_shift(const RatPoly& q, const Rat& shift);
/// Composition outer(inner(x)).
RatPoly compose(const RatPoly& outer, const RatPoly& inner);

/// Positive rational multiple of q with coprime integer coefficients.
ZPoly primitive_part(const RatPoly& q);
RatPoly to_rat_poly(const ZPoly& z);
int degree(const ZPoly& z);
void trim(ZPoly& z);

/// Sign of z(x) for rational x, computed exactly on the homogenised form.
int sign_at(const ZPoly& z, const Rat& x);

}  // namespace poslab
