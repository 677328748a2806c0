#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "poslab/expr.hpp"
#include "poslab/rat_poly.hpp"

namespace poslab {

using Exponent = std::vector<unsigned>;

/// Sparse multivariate polynomial with ParamPoly coefficients. Zero
/// coefficients are never stored; every exponent has the declared arity.
class MPoly {
 public:
  using Terms = std::map<Exponent, ParamPoly>;

  explicit MPoly(std::size_t arity = 0) : arity_(arity) {}
  static MPoly constant(std::size_t arity, const ParamPoly& c);
  static MPoly variable(std::size_t arity, std::size_t index);

  std::size_t arity() const noexcept { return arity_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  std::size_t size() const noexcept { return terms_.size(); }

  ParamPoly coeff(const Exponent& e) const;
  ParamPoly constant_term() const { return coeff(Exponent(arity_, 0)); }
  unsigned degree_in(std::size_t var) const;
  unsigned total_degree() const;
  /// True when no coefficient depends on p.
  bool param_free() const;

  /// Adds c * x^e (dropping the term if it cancels).
  void add_term(const Exponent& e, const ParamPoly& c);

  MPoly& operator+=(const MPoly& o);
  MPoly& operator-=(const MPoly& o);
  MPoly& operator*=(const ParamPoly& s);
  friend MPoly operator+(MPoly a, const MPoly& b) { return a += b; }
  friend MPoly operator-(MPoly a, const MPoly& b) { return a -= b; }
  friend MPoly operator*(const MPoly& a, const MPoly& b);
  friend MPoly operator*(MPoly a, const ParamPoly& s) { return a *= s; }
  friend bool operator==(const MPoly& a, const MPoly& b) { return a.arity_ == b.arity_ && a.terms_ == b.terms_; }

  /// Applies f to every coefficient, dropping those that become zero.
  template <class F>
  MPoly map_coeffs(F&& f) const {
    MPoly out(arity_);
    for (const auto& [e, c] : terms_) out.add_term(e, f(c));
    return out;
  }

  std::string to_string(const std::vector<std::string>& vars) const;

 private:
  std::size_t arity_;
  Terms terms_;
};

MPoly pow(const MPoly& a, unsigned e);

/// How the parameter p enters a RatFun's coefficients.
struct ParamMode {
  enum class Kind { Symbolic, Fixed, Algebraic };
  Kind kind = Kind::Symbolic;
  Rat value;         // Fixed
  RatPoly minpoly;   // Algebraic

  static ParamMode symbolic() { return {}; }
  static ParamMode fixed(Rat v) { return {Kind::Fixed, std::move(v), {}}; }
  static ParamMode algebraic(RatPoly m) { return {Kind::Algebraic, Rat(0), std::move(m)}; }
  std::string to_string() const;
};

/// Rational function num/den over ParamPoly coefficients. No multivariate gcd
/// is taken; equality is decided by cross-multiplication.
struct RatFun {
  MPoly num;
  MPoly den;
  std::vector<std::string> vars;
  ParamMode mode;

  std::size_t arity() const { return vars.size(); }
  /// den(0) vanishes in the active mode, so there is no Taylor expansion.
  bool non_expandable() const;
  bool param_free() const { return num.param_free() && den.param_free(); }
  std::string to_string() const;
};

RatFun to_ratfun(const ExprPtr& e, const std::vector<std::string>& vars);
/// parse + to_ratfun.
RatFun parse_ratfun(std::string_view text, const std::vector<std::string>& vars);

/// Brings den(0) to 1 when it is a nonzero constant, otherwise strips the
/// rational content of den from both parts.
void normalize(RatFun& f);

struct SymbolicParam {};
struct AlgebraicParam {
  RatPoly minpoly;
};
using TransformParam = std::variant<SymbolicParam, Rat, AlgebraicParam>;

/// Parses "symbolic", a rational "a/b", or "alg:<polynomial in p>".
TransformParam parse_transform_param(std::string_view text);
/// A polynomial in p alone, e.g. "2*p^3-3*p^2-1".
RatPoly parse_param_poly(std::string_view text);

/// (T_p f)(x) = f(p x_1/(1-(1-p)x_1), ...) / prod(1-(1-p)x_i), by substitution
/// and denominator clearing. f must not depend on p.
RatFun tp_transform(const RatFun& f, const TransformParam& param);

/// Substitutes a rational value for p in every coefficient.
RatFun instantiate(const RatFun& f, const Rat& p);

/// f.num*g.den - g.num*f.den == 0 (modulo the minimal polynomial in
/// algebraic mode). Throws IncompatibleModes for mismatched variables/modes.
bool ratfun_equal(const RatFun& f, const RatFun& g);

/// q mod m, keeping coefficient degrees below deg(m).
RatPoly reduce_mod(const RatPoly& q, const RatPoly& m);

}  // namespace poslab
