#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

#include "poslab/rat.hpp"
#include "poslab/rat_poly.hpp"

namespace poslab {

inline constexpr mpfr_prec_t kDefaultPrecision = 256;

/// Closed interval [lo, hi] with MPFR endpoints; every operation rounds
/// outward, so the result encloses the exact result of the same operation on
/// any points of the operands.
class IntervalScalar {
 public:
  explicit IntervalScalar(mpfr_prec_t precision = kDefaultPrecision);
  IntervalScalar(const Rat& value, mpfr_prec_t precision = kDefaultPrecision);
  IntervalScalar(const Rat& lo, const Rat& hi, mpfr_prec_t precision = kDefaultPrecision);
  IntervalScalar(const IntervalScalar& other);
  IntervalScalar(IntervalScalar&& other) noexcept;
  IntervalScalar& operator=(const IntervalScalar& other);
  IntervalScalar& operator=(IntervalScalar&& other) noexcept;
  ~IntervalScalar();

  mpfr_prec_t precision() const noexcept { return prec_; }
  mpfr_srcptr lo() const noexcept { return lo_; }
  mpfr_srcptr hi() const noexcept { return hi_; }
  mpfr_ptr lo() noexcept { return lo_; }
  mpfr_ptr hi() noexcept { return hi_; }

  bool contains_zero() const;
  bool contains(const Rat& x) const;
  bool contains(const IntervalScalar& other) const;
  /// lo > 0.
  bool certainly_positive() const { return mpfr_sgn(lo_) > 0; }
  bool certainly_negative() const { return mpfr_sgn(hi_) < 0; }
  /// (hi - lo) / min(|lo|, |hi|); +inf when the interval touches zero.
  double relative_width() const;

  IntervalScalar& operator+=(const IntervalScalar& o);
  IntervalScalar& operator-=(const IntervalScalar& o);
  IntervalScalar& operator*=(const IntervalScalar& o);
  /// Throws DivisionByZeroPolynomial if o contains zero.
  IntervalScalar& operator/=(const IntervalScalar& o);

  friend IntervalScalar operator+(IntervalScalar a, const IntervalScalar& b) { return a += b; }
  friend IntervalScalar operator-(IntervalScalar a, const IntervalScalar& b) { return a -= b; }
  friend IntervalScalar operator*(IntervalScalar a, const IntervalScalar& b) { return a *= b; }
  friend IntervalScalar operator/(IntervalScalar a, const IntervalScalar& b) { return a /= b; }

  std::string lo_string(int digits = 30) const;
  std::string hi_string(int digits = 30) const;

 private:
  mpfr_prec_t prec_;
  mpfr_t lo_;
  mpfr_t hi_;
  bool live_ = true;
};

/// acc -= a * b, with outward rounding; `scratch` holds two temporaries.
void submul(IntervalScalar& acc, const IntervalScalar& a, const IntervalScalar& b, IntervalScalar scratch[2]);

/// Encloses { q(t) : t in x } (Horner form).
IntervalScalar interval_eval(const RatPoly& q, const IntervalScalar& x);

std::string mpfr_to_string(mpfr_srcptr x, int digits, mpfr_rnd_t rnd);

}  // namespace poslab
