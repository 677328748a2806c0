#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace poslab {

/// Exact rational; GMP keeps it canonical (lowest terms, positive denominator).
using Rat = mpq_class;
using BigInt = mpz_class;

/// Parses "a", "-a" or "a/b"; throws Error(InvalidArgument) on anything else.
Rat parse_rat(std::string_view text);

/// num/den in lowest terms (mpq_class(num, den) alone is not canonical).
inline Rat frac(long num, long den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

/// Always "num/den", also for integers ("2/1").
std::string to_string(const Rat& r);

/// Decimal rendering with `digits` significant digits (used for display only).
std::string to_decimal(const Rat& r, int digits = 20);

double to_double(const Rat& r);

inline int sign(const Rat& r) { return sgn(r); }
inline int sign(const BigInt& z) { return sgn(z); }

BigInt floor_rat(const Rat& r);

}  // namespace poslab
