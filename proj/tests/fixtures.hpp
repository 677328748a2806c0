#pragma once

#include <random>
#include <string>
#include <vector>

#include "poslab/ratfun.hpp"

namespace fixtures {

inline const std::vector<std::string> xyz{"x", "y", "z"};
inline const std::vector<std::string> xyzw{"x", "y", "z", "w"};

inline const char* const kAskey = "1/(1-x-y-z+4*x*y*z)";
inline const char* const kSzego = "1/(1-x-y-z+(3/4)*(x*y+x*z+y*z))";
inline const char* const kTwoThirds = "1/(1-x-y-z-w+(2/3)*(x*y+x*z+x*w+y*z+y*w+z*w))";
inline const char* const kTwoThirdsAtRoot3 = "1/(1-x-y-z-w+2*(x*y*z+x*y*w+x*z*w+y*z*w)+4*x*y*z*w)";
inline const char* const kSixtyFour = "1/(1-x-y-z-w+(64/27)*(x*y*z+x*y*w+x*z*w+y*z*w))";

inline poslab::RatFun askey() { return poslab::parse_ratfun(kAskey, xyz); }
inline poslab::RatFun two_thirds() { return poslab::parse_ratfun(kTwoThirds, xyzw); }
inline poslab::RatFun sixty_four() { return poslab::parse_ratfun(kSixtyFour, xyzw); }

/// Random p-free rational function with small integer coefficients and
/// denominator constant term 1.
inline poslab::RatFun random_ratfun(std::mt19937_64& rng, std::size_t arity) {
  using namespace poslab;
  std::uniform_int_distribution<int> coef(-3, 3), deg(0, 2), terms(1, 4);
  std::vector<std::string> vars;
  for (std::size_t i = 0; i < arity; ++i) vars.push_back(std::string(1, static_cast<char>('a' + i)));
  auto random_poly = [&](bool unit_constant) {
    MPoly m(arity);
    int n = terms(rng);
    for (int t = 0; t < n; ++t) {
      Exponent e(arity);
      for (auto& x : e) x = static_cast<unsigned>(deg(rng));
      int c = coef(rng);
      if (c != 0) m.add_term(e, ParamPoly::constant(Rat(c)));
    }
    if (unit_constant) {
      const Exponent zero(arity, 0);
      m.add_term(zero, ParamPoly::constant(Rat(1)) - m.coeff(zero));
    }
    return m;
  };
  RatFun f{random_poly(false), random_poly(true), vars, ParamMode::symbolic()};
  if (f.num.is_zero()) f.num = MPoly::constant(arity, ParamPoly::constant(Rat(1)));
  return f;
}

}  // namespace fixtures
