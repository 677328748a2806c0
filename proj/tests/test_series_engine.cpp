#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "poslab/error.hpp"
#include "poslab/series.hpp"

using namespace poslab;
using fixtures::xyz;
using fixtures::xyzw;

namespace {

BigInt binomial(unsigned n, unsigned k) {
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

RatFun transformed(const RatFun& f) { return tp_transform(f, SymbolicParam{}); }

}  // namespace

TEST_CASE("box layout") {
  BoxLayout l(DegreeBox{{2, 3}});
  CHECK(l.cells() == 12);
  CHECK(l.index({1, 2}) == 6);
  CHECK(l.exponent(6) == Exponent{1, 2});
  auto levels = l.levels();
  CHECK(levels.size() == 6);
  CHECK(levels[1] == std::vector<std::size_t>{1, 4});
  std::size_t total = 0;
  for (const auto& lv : levels) total += lv.size();
  CHECK(total == 12);
  CHECK(DegreeBox::parse("4", 3).upper == std::vector<unsigned>{4, 4, 4});
  CHECK(DegreeBox::parse("1,2").upper == std::vector<unsigned>{1, 2});
  CHECK_THROWS_AS(DegreeBox::parse("1,x"), Error);
  CHECK_THROWS_AS(DegreeBox::parse("1,2", 3), Error);
}

TEST_CASE("constant function") {
  RatFun one = parse_ratfun("1", {"x", "y"});
  auto box = expand_exact(one, DegreeBox{{3, 3}});
  for (std::size_t i = 0; i < box.size(); ++i) CHECK(box.at(i) == (i == 0 ? 1 : 0));
}

TEST_CASE("binomial coefficients of 1/(1-x-y)") {
  RatFun f = parse_ratfun("1/(1-x-y)", {"x", "y"});
  auto box = expand_exact(f, DegreeBox{{5, 5}});
  for (unsigned n = 0; n <= 5; ++n)
    for (unsigned m = 0; m <= 5; ++m) CHECK(box({n, m}) == Rat(binomial(n + m, n)));
  CHECK(box({2, 3}) == 10);
}

TEST_CASE("geometric series") {
  auto box = brute_expand(parse_ratfun("1/(1-x)", {"x"}), DegreeBox{{6}});
  for (std::size_t i = 0; i < box.size(); ++i) CHECK(box.at(i) == ParamPoly::constant(Rat(1)));
  auto exact = expand_exact(parse_ratfun("1/(1-x)", {"x"}), DegreeBox{{6}});
  for (std::size_t i = 0; i < exact.size(); ++i) CHECK(exact.at(i) == 1);
}

TEST_CASE("coefficient polynomials of the transformed functions") {
  RatFun t1 = transformed(fixtures::askey());
  CHECK(coeff<ParamPoly>(t1, {1, 1, 1}) == RatPoly({Rat(1), Rat(0), Rat(3), Rat(-2)}));
  RatFun t2 = transformed(fixtures::two_thirds());
  // One third of 3+6p^2-p^4: at p = 1 a multinomial count of the untransformed
  // function gives 24 - 24 + 8/3.
  RatPoly c2 = coeff<ParamPoly>(t2, {1, 1, 1, 1});
  CHECK(c2 == RatPoly({Rat(1), Rat(0), Rat(2), Rat(0), Rat(-1, 3)}));
  CHECK(c2(Rat(1)) == Rat(8, 3));
  CHECK(coeff<Rat>(fixtures::two_thirds(), {1, 1, 1, 1}) == Rat(8, 3));
  RatFun t3 = transformed(fixtures::sixty_four());
  CHECK(coeff<ParamPoly>(t3, {1, 1, 1, 1}) ==
        RatPoly({Rat(1), Rat(0), Rat(6), Rat(-40, 27), Rat(-13, 27)}));
  CHECK(coeff<ParamPoly>(t3, {0, 0, 0, 0}) == ParamPoly::constant(Rat(1)));
  // The untransformed cubic function at the origin cell (1,1,1): 3! - 4.
  CHECK(brute_expand(fixtures::askey(), DegreeBox::cube(3, 1))({1, 1, 1}) == ParamPoly::constant(Rat(2)));
  CHECK(coeff<Rat>(fixtures::askey(), {1, 1, 1}) == 2);
}

TEST_CASE("expand agrees with the geometric-series oracle") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<unsigned> arity(1, 3), bound(0, 4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = arity(rng);
    RatFun f = fixtures::random_ratfun(rng, n);
    DegreeBox box;
    for (std::size_t i = 0; i < n; ++i) box.upper.push_back(bound(rng));
    auto oracle = brute_expand(f, box);
    auto exact = expand_exact(f, box);
    auto sym = expand_symbolic(f, box);
    for (std::size_t i = 0; i < oracle.size(); ++i) {
      REQUIRE(oracle.at(i).degree() <= 0);
      CHECK(oracle.at(i).coeff(0) == exact.at(i));
      CHECK(oracle.at(i) == sym.at(i));
    }
  }
}

TEST_CASE("reconvolution identity") {
  std::vector<std::size_t> all(3 * 3 * 3 * 3);
  std::iota(all.begin(), all.end(), 0);
  RatFun t = tp_transform(fixtures::sixty_four(), Rat(3, 2));
  auto box = expand_exact(t, DegreeBox::cube(4, 2));
  CHECK(reconvolution_holds(t, box, all));
  RatFun ts = transformed(fixtures::two_thirds());
  auto sym = expand_symbolic(ts, DegreeBox::cube(4, 2));
  CHECK(reconvolution_holds(ts, sym, all));

  std::vector<Rat> tampered = box.entries();
  tampered[40] += 1;
  CoeffBox<Rat> bad(box.box(), box.vars(), tampered);
  CHECK_FALSE(reconvolution_holds(t, bad, all));
}

TEST_CASE("symbolic, exact and interval modes agree") {
  RatFun sym = transformed(fixtures::askey());
  DegreeBox box = DegreeBox::cube(3, 3);
  auto s = expand_symbolic(sym, box);
  for (const Rat& p : {Rat(2), Rat(2430275, 1448618), Rat(1, 3)}) {
    RatFun fixed = tp_transform(fixtures::askey(), p);
    auto e = expand_exact(fixed, box);
    auto iv = expand_interval(fixed, box);
    for (std::size_t i = 0; i < e.size(); ++i) {
      CHECK(s.at(i)(p) == e.at(i));
      CHECK(iv.at(i).contains(e.at(i)));
    }
  }
}

TEST_CASE("algebraic expansion reduces modulo the minimal polynomial") {
  RatFun t = tp_transform(fixtures::two_thirds(), AlgebraicParam{RatPoly({Rat(-3), Rat(0), Rat(1)})});
  RatFun want = parse_ratfun(fixtures::kTwoThirdsAtRoot3, xyzw);
  DegreeBox box = DegreeBox::cube(4, 2);
  auto a = expand_symbolic(t, box);
  auto b = expand_exact(want, box);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.at(i).degree() <= 1);
    CHECK(a.at(i) == ParamPoly::constant(b.at(i)));
  }
}

TEST_CASE("symmetric functions give symmetric boxes") {
  RatFun t = tp_transform(fixtures::sixty_four(), Rat(7, 5));
  auto box = expand_exact(t, DegreeBox::cube(4, 3));
  for (std::size_t i = 0; i < box.size(); ++i) {
    Exponent e = box.layout().exponent(i);
    Exponent s = e;
    std::sort(s.begin(), s.end());
    do {
      CHECK(box(s) == box.at(i));
    } while (std::next_permutation(s.begin(), s.end()));
  }
}

TEST_CASE("results do not depend on the thread count") {
  RatFun t = tp_transform(fixtures::askey(), Rat(2430275, 1448618));
  DegreeBox box = DegreeBox::cube(3, 12);
  auto one = expand_exact(t, box, {.threads = 1});
  auto four = expand_exact(t, box, {.threads = 4});
  CHECK(one.entries() == four.entries());
  auto i1 = expand_interval(t, box, {.threads = 1});
  auto i4 = expand_interval(t, box, {.threads = 4});
  for (std::size_t i = 0; i < i1.size(); ++i) {
    CHECK(mpfr_equal_p(i1.at(i).lo(), i4.at(i).lo()));
    CHECK(mpfr_equal_p(i1.at(i).hi(), i4.at(i).hi()));
  }
  RatFun sym = transformed(fixtures::askey());
  CHECK(expand_symbolic(sym, DegreeBox::cube(3, 5), {.threads = 1}).entries() ==
        expand_symbolic(sym, DegreeBox::cube(3, 5), {.threads = 3}).entries());
}

TEST_CASE("expansion errors") {
  RatFun f = parse_ratfun("1/(x+y)", {"x", "y"});
  CHECK_THROWS_AS(expand_exact(f, DegreeBox{{2, 2}}), Error);
  try {
    expand_exact(fixtures::askey(), DegreeBox::cube(3, 200));
    FAIL("expected budget error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BudgetExceeded);
  }
  try {
    brute_expand(fixtures::askey(), DegreeBox::cube(3, 30));
    FAIL("expected budget error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::BudgetExceeded);
  }
  RatFun pden = parse_ratfun("1/(p-x)", {"x"});
  try {
    expand_symbolic(pden, DegreeBox{{2}});
    FAIL("expected non-expandable");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonExpandable);
  }
}
