#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "poslab/error.hpp"
#include "poslab/series.hpp"

using namespace poslab;
using fixtures::xyz;
using fixtures::xyzw;

namespace {

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error thrown");
  return ErrorKind::InvalidArgument;
}

RatFun with_mode(RatFun f, ParamMode m) {
  f.mode = std::move(m);
  return f;
}

}  // namespace

TEST_CASE("parse accepts the grammar") {
  CHECK(parse(fixtures::kAskey, xyz));
  CHECK(parse(fixtures::kTwoThirds, xyzw));
  CHECK(parse("-x^2*(p-1)/3", {"x"}));
  CHECK(parse("--x", {"x"}));
}

TEST_CASE("parse errors carry a position") {
  CHECK(kind_of([] { parse("1/(1-q)", {"x"}); }) == ErrorKind::UnknownIdentifier);
  try {
    parse("1+*x", {"x"});
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.kind() == ErrorKind::Syntax);
    CHECK(e.position() == 2);
  }
  CHECK(kind_of([] { parse("2x", {"x"}); }) == ErrorKind::Syntax);
  CHECK(kind_of([] { parse("x^-1", {"x"}); }) == ErrorKind::Syntax);
  CHECK(kind_of([] { parse("(x", {"x"}); }) == ErrorKind::Syntax);
  CHECK(kind_of([] { parse("", {"x"}); }) == ErrorKind::Syntax);
  CHECK(kind_of([] { parse_var_list("x,p"); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { parse_var_list("x,x"); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("to_ratfun normalizes") {
  RatFun f = fixtures::askey();
  CHECK(f.den.to_string(xyz) == "1-x-y-z+4*x*y*z");
  CHECK(f.num.to_string(xyz) == "1");

  RatFun g = parse_ratfun("(1+x)/(1+x)", {"x"});
  CHECK(ratfun_equal(g, parse_ratfun("1", {"x"})));

  RatFun h = parse_ratfun("1/(x)", {"x"});
  CHECK(h.non_expandable());

  RatFun k = parse_ratfun("3/(2-4*x)", {"x"});
  CHECK(k.den.constant_term() == ParamPoly::constant(Rat(1)));
  CHECK(k.num.to_string({"x"}) == "3/2");

  CHECK(kind_of([] { parse_ratfun("1/(x-x)", {"x"}); }) == ErrorKind::DivisionByZeroPolynomial);
}

TEST_CASE("T_p at 1/2 maps the cubic function to the quadratic one") {
  RatFun t = tp_transform(fixtures::askey(), Rat(1, 2));
  CHECK(ratfun_equal(t, parse_ratfun(fixtures::kSzego, xyz)));
  CHECK_FALSE(ratfun_equal(fixtures::askey(), parse_ratfun(fixtures::kSzego, xyz)));
  CHECK(ratfun_equal(fixtures::askey(), fixtures::askey()));
}

TEST_CASE("T_p at sqrt 3 in algebraic mode") {
  RatFun t = tp_transform(fixtures::two_thirds(), AlgebraicParam{RatPoly({Rat(-3), Rat(0), Rat(1)})});
  CHECK(t.mode.kind == ParamMode::Kind::Algebraic);
  RatFun want = with_mode(parse_ratfun(fixtures::kTwoThirdsAtRoot3, xyzw), t.mode);
  CHECK(ratfun_equal(t, want));
  RatFun wrong = with_mode(parse_ratfun(fixtures::kSixtyFour, xyzw), t.mode);
  CHECK_FALSE(ratfun_equal(t, wrong));
}

TEST_CASE("T_1 is the identity") {
  for (auto f : {fixtures::askey(), fixtures::two_thirds(), fixtures::sixty_four()})
    CHECK(ratfun_equal(tp_transform(f, Rat(1)), f));
}

TEST_CASE("inverse and composition laws") {
  const std::vector<Rat> ps{Rat(2), Rat(3, 2), Rat(5, 7)};
  for (auto f : {fixtures::askey(), fixtures::two_thirds(), fixtures::sixty_four()}) {
    for (const Rat& p : ps) {
      RatFun back = tp_transform(tp_transform(f, p), Rat(1 / p));
      CHECK(ratfun_equal(back, f));
    }
    for (const Rat& p : ps)
      for (const Rat& q : {Rat(1, 3), Rat(4, 5)}) {
        RatFun lhs = tp_transform(tp_transform(f, q), p);
        CHECK(ratfun_equal(lhs, tp_transform(f, Rat(p * q))));
      }
  }
}

TEST_CASE("symbolic transform instantiated equals fixed transform") {
  for (auto f : {fixtures::askey(), fixtures::two_thirds()}) {
    RatFun sym = tp_transform(f, SymbolicParam{});
    CHECK(sym.mode.kind == ParamMode::Kind::Symbolic);
    for (const Rat& p : {Rat(2), Rat(3, 2), Rat(5, 7)}) {
      RatFun fixed = tp_transform(f, p);
      RatFun inst = instantiate(sym, p);
      CHECK(ratfun_equal(inst, fixed));
      DegreeBox box = DegreeBox::cube(f.arity(), 2);
      auto a = expand_exact(inst, box);
      auto b = expand_exact(fixed, box);
      CHECK(a.entries() == b.entries());
      auto s = expand_symbolic(sym, box);
      for (std::size_t i = 0; i < s.size(); ++i) CHECK(s.at(i)(p) == b.at(i));
    }
  }
}

TEST_CASE("mode mismatches are rejected") {
  RatFun sym = tp_transform(fixtures::askey(), SymbolicParam{});
  RatFun fixed = tp_transform(fixtures::askey(), Rat(2));
  CHECK(kind_of([&] { ratfun_equal(sym, fixed); }) == ErrorKind::IncompatibleModes);
  CHECK(kind_of([&] { tp_transform(sym, Rat(2)); }) == ErrorKind::IncompatibleModes);
  CHECK(kind_of([&] { ratfun_equal(fixtures::askey(), fixtures::two_thirds()); }) == ErrorKind::IncompatibleModes);
}

TEST_CASE("transform parameters parse") {
  CHECK(std::holds_alternative<SymbolicParam>(parse_transform_param("symbolic")));
  CHECK(std::get<Rat>(parse_transform_param("3/6")) == Rat(1, 2));
  auto alg = std::get<AlgebraicParam>(parse_transform_param("alg:p^2-3"));
  CHECK(alg.minpoly == RatPoly({Rat(-3), Rat(0), Rat(1)}));
  CHECK(kind_of([] { parse_transform_param("alg:x-1"); }) == ErrorKind::UnknownIdentifier);
}

TEST_CASE("printing round-trips through the parser") {
  std::mt19937_64 rng(17);
  const std::vector<std::string> texts{
      fixtures::kAskey, fixtures::kTwoThirds, fixtures::kSixtyFour, "x/2/3", "-(x-y)^3/(1-x*y)",
      "(p-1)*x-(2/3)/(1+p*y)", "x^0+-y", "1/(1-(x+y)^2)"};
  const std::vector<std::string> vars{"x", "y", "z", "w"};
  for (const auto& t : texts) {
    ExprPtr e = parse(t, vars);
    std::string printed = print(e, vars);
    ExprPtr again = parse(printed, vars);
    CHECK(print(again, vars) == printed);
    CHECK(ratfun_equal(to_ratfun(e, vars), to_ratfun(again, vars)));
  }
  for (int trial = 0; trial < 50; ++trial) {
    RatFun f = fixtures::random_ratfun(rng, 3);
    std::string text = f.to_string();
    RatFun g = parse_ratfun(text, f.vars);
    CHECK(ratfun_equal(f, g));
  }
}
