#include "poslab/ratfun.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "poslab/error.hpp"

namespace poslab {

// ---------------------------------------------------------------- MPoly

MPoly MPoly::constant(std::size_t arity, const ParamPoly& c) {
  MPoly m(arity);
  m.add_term(Exponent(arity, 0), c);
  return m;
}

MPoly MPoly::variable(std::size_t arity, std::size_t index) {
  MPoly m(arity);
  Exponent e(arity, 0);
  e.at(index) = 1;
  m.add_term(e, ParamPoly::constant(1));
  return m;
}

ParamPoly MPoly::coeff(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? ParamPoly() : it->second;
}

unsigned MPoly::degree_in(std::size_t var) const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
  return d;
}

unsigned MPoly::total_degree() const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0u));
  return d;
}

bool MPoly::param_free() const {
  return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.second.is_constant(); });
}

void MPoly::add_term(const Exponent& e, const ParamPoly& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

MPoly& MPoly::operator+=(const MPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

MPoly& MPoly::operator-=(const MPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

MPoly& MPoly::operator*=(const ParamPoly& s) {
  if (s.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  std::erase_if(terms_, [](const auto& t) { return t.second.is_zero(); });
  return *this;
}

MPoly operator*(const MPoly& a, const MPoly& b) {
  MPoly out(a.arity_);
  Exponent e(a.arity_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  return out;
}

MPoly pow(const MPoly& a, unsigned e) {
  MPoly result = MPoly::constant(a.arity(), ParamPoly::constant(1));
  MPoly base = a;
  while (e) {
    if (e & 1u) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

std::string MPoly::to_string(const std::vector<std::string>& vars) const {
  if (terms_.empty()) return "0";
  std::vector<const Terms::value_type*> order;
  for (const auto& t : terms_) order.push_back(&t);
  auto deg = [](const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0u); };
  std::stable_sort(order.begin(), order.end(), [&](auto* a, auto* b) {
    unsigned da = deg(a->first), db = deg(b->first);
    if (da != db) return da < db;
    return a->first > b->first;
  });
  std::ostringstream os;
  bool first = true;
  for (const auto* t : order) {
    const auto& [e, c] = *t;
    const bool is_one = deg(e) == 0;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += vars.at(i);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (c.is_constant()) {
      const Rat& v = c.coeff(0);
      if (v < 0)
        os << "-";
      else if (!first)
        os << "+";
      Rat mag = abs(v);
      if (is_one)
        os << mag.get_str();
      else if (mag == 1 && !(first && v < 0))
        os << mono;
      else
        os << mag.get_str() << "*" << mono;
    } else {
      if (!first) os << "+";
      os << "(" << c.to_string("p") << ")";
      if (!is_one) os << "*" << mono;
    }
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------------- modes

std::string ParamMode::to_string() const {
  switch (kind) {
    case Kind::Symbolic: return "symbolic";
    case Kind::Fixed: return poslab::to_string(value);
    case Kind::Algebraic: return "alg:" + minpoly.to_string("p");
  }
  return "";
}

RatPoly reduce_mod(const RatPoly& q, const RatPoly& m) { return rem(q, m); }

bool RatFun::non_expandable() const {
  ParamPoly c = den.constant_term();
  if (mode.kind == ParamMode::Kind::Algebraic) c = reduce_mod(c, mode.minpoly);
  return c.is_zero();
}

std::string RatFun::to_string() const { return "(" + num.to_string(vars) + ")/(" + den.to_string(vars) + ")"; }

// ---------------------------------------------------------------- parsing

namespace {

struct Frac {
  MPoly num;
  MPoly den;
};

Frac eval(const Expr& e, std::size_t arity) {
  using K = Expr::Kind;
  const MPoly one = MPoly::constant(arity, ParamPoly::constant(1));
  switch (e.kind) {
    case K::Number: return {MPoly::constant(arity, ParamPoly::constant(e.value)), one};
    case K::Variable: return {MPoly::variable(arity, e.var), one};
    case K::Param: return {MPoly::constant(arity, ParamPoly::identity()), one};
    case K::Neg: {
      Frac a = eval(*e.lhs, arity);
      a.num *= ParamPoly::constant(-1);
      return a;
    }
    case K::Add:
    case K::Sub: {
      Frac a = eval(*e.lhs, arity);
      Frac b = eval(*e.rhs, arity);
      if (e.kind == K::Sub) b.num *= ParamPoly::constant(-1);
      if (a.den == b.den) return {a.num + b.num, a.den};
      return {a.num * b.den + b.num * a.den, a.den * b.den};
    }
    case K::Mul: {
      Frac a = eval(*e.lhs, arity);
      Frac b = eval(*e.rhs, arity);
      return {a.num * b.num, a.den * b.den};
    }
    case K::Div: {
      Frac a = eval(*e.lhs, arity);
      Frac b = eval(*e.rhs, arity);
      if (b.num.is_zero()) throw Error(ErrorKind::DivisionByZeroPolynomial, "division by an expression equal to 0");
      return {a.num * b.den, a.den * b.num};
    }
    case K::Pow: {
      Frac a = eval(*e.lhs, arity);
      return {pow(a.num, e.exponent), pow(a.den, e.exponent)};
    }
  }
  throw Error(ErrorKind::InvalidArgument, "bad expression node");
}

Rat rational_content(const MPoly& m) {
  BigInt g = 0, l = 1;
  for (const auto& [e, c] : m.terms())
    for (const auto& r : c.coeffs()) {
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), r.get_num().get_mpz_t());
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), r.get_den().get_mpz_t());
    }
  if (g == 0) return Rat(1);
  Rat out(g, l);
  out.canonicalize();
  return out;
}

}  // namespace

void normalize(RatFun& f) {
  if (f.den.is_zero()) throw Error(ErrorKind::DivisionByZeroPolynomial, "denominator is the zero polynomial");
  ParamPoly c0 = f.den.constant_term();
  if (f.mode.kind == ParamMode::Kind::Algebraic) c0 = reduce_mod(c0, f.mode.minpoly);
  Rat scale;
  if (!c0.is_zero() && c0.is_constant()) {
    scale = c0.coeff(0);
  } else {
    scale = rational_content(f.den);
  }
  if (scale == 1) return;
  ParamPoly inv = ParamPoly::constant(1 / scale);
  f.num *= inv;
  f.den *= inv;
}

RatFun to_ratfun(const ExprPtr& e, const std::vector<std::string>& vars) {
  Frac fr = eval(*e, vars.size());
  RatFun f{std::move(fr.num), std::move(fr.den), vars, ParamMode::symbolic()};
  normalize(f);
  return f;
}

RatFun parse_ratfun(std::string_view text, const std::vector<std::string>& vars) {
  return to_ratfun(parse(text, vars), vars);
}

RatPoly parse_param_poly(std::string_view text) {
  RatFun m = parse_ratfun(text, {});
  if (!m.den.constant_term().is_constant() || m.den.constant_term().is_zero())
    throw Error(ErrorKind::InvalidArgument, "expected a polynomial in p");
  return m.num.constant_term() * (1 / m.den.constant_term().coeff(0));
}

TransformParam parse_transform_param(std::string_view text) {
  if (text == "symbolic") return SymbolicParam{};
  if (text.rfind("alg:", 0) == 0) {
    ParamPoly poly = parse_param_poly(text.substr(4));
    if (poly.degree() < 1) throw Error(ErrorKind::InvalidArgument, "minimal polynomial must have degree >= 1");
    return AlgebraicParam{poly};
  }
  return parse_rat(text);
}

// ---------------------------------------------------------------- T_p

namespace {

struct Substitution {
  ParamPoly p;
  ParamPoly q;  // 1 - p
  std::optional<RatPoly> modulus;

  ParamPoly reduce(ParamPoly c) const { return modulus ? reduce_mod(c, *modulus) : c; }
};

// Coefficients (in x) of p^a x^a (1 - q x)^(e - a).
std::vector<ParamPoly> factor_poly(const Substitution& s, unsigned a, unsigned e) {
  std::vector<ParamPoly> out(e + 1);
  ParamPoly pa = s.reduce(pow(s.p, a));
  const unsigned m = e - a;
  ParamPoly minus_q_pow = ParamPoly::constant(1);
  BigInt binom = 1;
  for (unsigned k = 0; k <= m; ++k) {
    out[a + k] = s.reduce(pa * minus_q_pow * Rat(binom));
    minus_q_pow = s.reduce(minus_q_pow * -s.q);
    binom = binom * (m - k) / (k + 1);
  }
  return out;
}

// sum_alpha c_alpha prod_i p^alpha_i x_i^alpha_i (1 - q x_i)^(e_i - alpha_i)
MPoly substitute(const MPoly& poly, const std::vector<unsigned>& e, const Substitution& s) {
  const std::size_t n = poly.arity();
  MPoly out(n);
  for (const auto& [alpha, c] : poly.terms()) {
    std::vector<std::pair<Exponent, ParamPoly>> partial{{Exponent(n, 0), c}};
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<ParamPoly> f = factor_poly(s, alpha[i], e[i]);
      std::vector<std::pair<Exponent, ParamPoly>> next;
      for (const auto& [ex, cc] : partial)
        for (unsigned k = 0; k < f.size(); ++k) {
          if (f[k].is_zero()) continue;
          Exponent ek = ex;
          ek[i] = k;
          next.emplace_back(std::move(ek), s.reduce(cc * f[k]));
        }
      partial = std::move(next);
    }
    for (const auto& [ex, cc] : partial) out.add_term(ex, cc);
  }
  return out.map_coeffs([&](const ParamPoly& c) { return s.reduce(c); });
}

MPoly one_minus_qx_pow(std::size_t n, std::size_t i, unsigned power, const Substitution& s) {
  MPoly base = MPoly::constant(n, ParamPoly::constant(1)) - MPoly::variable(n, i) * s.q;
  MPoly r = pow(base, power);
  return r.map_coeffs([&](const ParamPoly& c) { return s.reduce(c); });
}

}  // namespace

RatFun tp_transform(const RatFun& f, const TransformParam& param) {
  if (!f.param_free() || f.mode.kind == ParamMode::Kind::Algebraic)
    throw Error(ErrorKind::IncompatibleModes, "T_p needs a function that does not already depend on p");
  Substitution s;
  ParamMode mode;
  if (std::holds_alternative<SymbolicParam>(param)) {
    s.p = ParamPoly::identity();
    mode = ParamMode::symbolic();
  } else if (const Rat* r = std::get_if<Rat>(&param)) {
    s.p = ParamPoly::constant(*r);
    mode = ParamMode::fixed(*r);
  } else {
    const auto& alg = std::get<AlgebraicParam>(param);
    if (alg.minpoly.degree() < 1) throw Error(ErrorKind::InvalidArgument, "minimal polynomial must have degree >= 1");
    s.p = ParamPoly::identity();
    s.modulus = alg.minpoly;
    mode = ParamMode::algebraic(alg.minpoly);
  }
  s.p = s.reduce(s.p);
  s.q = s.reduce(ParamPoly::constant(1) - s.p);

  const std::size_t n = f.arity();
  std::vector<unsigned> en(n), ed(n);
  for (std::size_t i = 0; i < n; ++i) {
    en[i] = f.num.degree_in(i);
    ed[i] = f.den.degree_in(i);
  }
  MPoly num = substitute(f.num, en, s);
  MPoly den = substitute(f.den, ed, s);
  // T_p f = num * prod (1-q x_i)^(ed_i - en_i - 1) / den.
  for (std::size_t i = 0; i < n; ++i) {
    long k = static_cast<long>(ed[i]) - static_cast<long>(en[i]) - 1;
    if (k > 0) {
      num = num * one_minus_qx_pow(n, i, static_cast<unsigned>(k), s);
    } else if (k < 0) {
      den = den * one_minus_qx_pow(n, i, static_cast<unsigned>(-k), s);
    }
  }
  if (s.modulus) {
    num = num.map_coeffs([&](const ParamPoly& c) { return s.reduce(c); });
    den = den.map_coeffs([&](const ParamPoly& c) { return s.reduce(c); });
  }
  RatFun out{std::move(num), std::move(den), f.vars, mode};
  if (out.den.is_zero()) throw Error(ErrorKind::DivisionByZeroPolynomial, "transformed denominator vanishes");
  if (out.non_expandable())
    throw Error(ErrorKind::NonExpandable, "transformed denominator has vanishing constant term");
  normalize(out);
  return out;
}

RatFun instantiate(const RatFun& f, const Rat& p) {
  if (f.mode.kind == ParamMode::Kind::Algebraic)
    throw Error(ErrorKind::IncompatibleModes, "cannot substitute a rational into an algebraic-mode function");
  auto at = [&](const ParamPoly& c) { return ParamPoly::constant(c(p)); };
  RatFun out{f.num.map_coeffs(at), f.den.map_coeffs(at), f.vars,
             f.mode.kind == ParamMode::Kind::Fixed ? f.mode : ParamMode::fixed(p)};
  if (out.den.is_zero()) throw Error(ErrorKind::DivisionByZeroPolynomial, "denominator vanishes at p = " + to_string(p));
  normalize(out);
  return out;
}

bool ratfun_equal(const RatFun& f, const RatFun& g) {
  if (f.vars != g.vars) throw Error(ErrorKind::IncompatibleModes, "functions use different variables");
  const bool f_alg = f.mode.kind == ParamMode::Kind::Algebraic;
  const bool g_alg = g.mode.kind == ParamMode::Kind::Algebraic;
  std::optional<RatPoly> modulus;
  if (f_alg && g_alg) {
    if (!(f.mode.minpoly == g.mode.minpoly)) {
      // Same number if the monic forms agree.
      RatPoly a = f.mode.minpoly * (1 / f.mode.minpoly.leading());
      RatPoly b = g.mode.minpoly * (1 / g.mode.minpoly.leading());
      if (!(a == b)) throw Error(ErrorKind::IncompatibleModes, "different minimal polynomials");
    }
    modulus = f.mode.minpoly;
  } else if (f_alg || g_alg) {
    const RatFun& other = f_alg ? g : f;
    if (!other.param_free()) throw Error(ErrorKind::IncompatibleModes, "algebraic vs p-dependent function");
    modulus = f_alg ? f.mode.minpoly : g.mode.minpoly;
  } else {
    const bool f_sym = !f.param_free();
    const bool g_sym = !g.param_free();
    if (f_sym != g_sym && (f.mode.kind == ParamMode::Kind::Fixed || g.mode.kind == ParamMode::Kind::Fixed))
      throw Error(ErrorKind::IncompatibleModes, "fixed-parameter vs p-dependent function");
  }
  MPoly diff = f.num * g.den - g.num * f.den;
  if (modulus) diff = diff.map_coeffs([&](const ParamPoly& c) { return reduce_mod(c, *modulus); });
  return diff.is_zero();
}

}  // namespace poslab
