#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "poslab/error.hpp"
#include "poslab/scan.hpp"

using namespace poslab;

namespace {

bool near(const PBound& b, double lo, double hi) {
  return b.bound && to_double(b.bound->lo) > lo && to_double(b.bound->hi) < hi;
}

}  // namespace

TEST_CASE("pmax on the smallest boxes") {
  PBound a = pmax_upper_bound(fixtures::askey(), DegreeBox::cube(3, 1));
  CHECK(near(a, 1.67, 1.69));
  CHECK(a.witness == Exponent{1, 1, 1});
  CHECK(a.cells_scanned == 8);
  CHECK(a.bound->width() <= default_tolerance());

  PBound b = pmax_upper_bound(fixtures::two_thirds(), DegreeBox::cube(4, 1));
  CHECK(near(b, 2.53, 2.55));
  CHECK(b.witness == Exponent{1, 1, 1, 1});

  PBound none = pmax_upper_bound(parse_ratfun("1/(1-x)", {"x"}), DegreeBox{{4}});
  CHECK_FALSE(none.bound);
  CHECK(none.cells_scanned == 5);
}

TEST_CASE("the witness polynomial has its point inside the bound") {
  PBound a = pmax_upper_bound(fixtures::askey(), DegreeBox::cube(3, 4));
  REQUIRE(a.bound);
  ZPoly z = primitive_part(a.witness_poly);
  CHECK(sign_at(z, a.bound->lo) > 0);
  CHECK(sign_at(z, a.bound->hi) < 0);
  // No scanned cell is nonpositive strictly below the bound.
  auto box = expand_symbolic(tp_transform(fixtures::askey(), SymbolicParam{}), DegreeBox::cube(3, 4));
  for (std::size_t i = 0; i < box.size(); ++i) CHECK(box.at(i)(a.bound->lo) > 0);
}

TEST_CASE("ties go to the lexicographically smallest cell") {
  PBound s = pmax_upper_bound(parse_ratfun("1/(1-x-y+3*x*y)", {"x", "y"}), DegreeBox::cube(2, 3));
  REQUIRE(s.bound);
  CHECK(s.witness[0] <= s.witness[1]);
}

TEST_CASE("at-origin cells are flagged") {
  PBound z = pmax_upper_bound(parse_ratfun("x", {"x"}), DegreeBox{{3}});
  REQUIRE(z.bound);
  CHECK(z.at_origin);
  CHECK(z.bound->lo == 0);
  CHECK(z.witness == Exponent{0});

  PBound n = pmax_upper_bound(parse_ratfun("-1+x", {"x"}), DegreeBox{{3}});
  CHECK(n.at_origin);
}

TEST_CASE("profiles shrink with the box") {
  auto prof = bound_vs_box_profile(fixtures::askey(),
                                   {DegreeBox::cube(3, 1), DegreeBox::cube(3, 3), DegreeBox::cube(3, 5)});
  REQUIRE(prof.size() == 3);
  for (const auto& b : prof) {
    CHECK(near(b, 1.67, 1.69));
    CHECK(compare_bounds(b, prof[0]) == 0);
  }
  auto single = bound_vs_box_profile(fixtures::askey(), {DegreeBox::cube(3, 2)});
  REQUIRE(single.size() == 1);
  CHECK(compare_bounds(single[0], pmax_upper_bound(fixtures::askey(), DegreeBox::cube(3, 2))) == 0);
  CHECK_THROWS_AS(bound_vs_box_profile(fixtures::askey(), {DegreeBox::cube(3, 3), DegreeBox::cube(3, 1)}), Error);
}

TEST_CASE("bounds never grow on nested boxes") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    RatFun f = fixtures::random_ratfun(rng, 2);
    PBound small = pmax_upper_bound(f, DegreeBox{{2, 2}});
    PBound large = pmax_upper_bound(f, DegreeBox{{3, 4}});
    CHECK(compare_bounds(large, small) <= 0);
  }
}

TEST_CASE("positivity_at finds the (1,1,1) failure") {
  ScanReport r = positivity_at(fixtures::askey(), Rat(2), DegreeBox::cube(3, 3));
  CHECK_FALSE(r.all_positive);
  REQUIRE(r.witness);
  CHECK(*r.witness == Exponent{1, 1, 1});
  CHECK(r.witness_value == -3);
  CHECK(r.cells_scanned == 64);

  ScanReport e = positivity_at(fixtures::askey(), Rat(2), DegreeBox::cube(3, 3), ScanStrategy::ExactOnly);
  CHECK(*e.witness == Exponent{1, 1, 1});
  CHECK(e.witness_value == -3);
}

TEST_CASE("positivity_at just below the thresholds") {
  ScanReport a = positivity_at(fixtures::askey(), parse_rat("2430275/1448618"), DegreeBox::cube(3, 12));
  CHECK(a.all_positive);
  ScanReport b = positivity_at(fixtures::two_thirds(), parse_rat("730647/287378"), DegreeBox::cube(4, 5));
  CHECK(b.all_positive);
  ScanReport above = positivity_at(fixtures::askey(), parse_rat("1678/1000"), DegreeBox::cube(3, 4));
  CHECK_FALSE(above.all_positive);
  CHECK(*above.witness == Exponent{1, 1, 1});
}

TEST_CASE("interval verdicts agree with exact values on sampled cells") {
  std::mt19937_64 rng(5);
  for (const Rat& p : {Rat(2430275, 1448618), Rat(3, 2), Rat(2)}) {
    RatFun tf = tp_transform(fixtures::askey(), p);
    DegreeBox box = DegreeBox::cube(3, 14);
    auto iv = expand_interval(tf, box);
    auto ex = expand_exact(tf, box);
    std::bernoulli_distribution pick(0.05);
    for (std::size_t i = 0; i < iv.size(); ++i) {
      if (!pick(rng)) continue;
      CHECK(iv.at(i).contains(ex.at(i)));
      if (iv.at(i).certainly_positive()) CHECK(ex.at(i) > 0);
      if (iv.at(i).certainly_negative()) CHECK(ex.at(i) < 0);
    }
    auto r1 = positivity_at(fixtures::askey(), p, box, ScanStrategy::IntervalFirst);
    auto r2 = positivity_at(fixtures::askey(), p, box, ScanStrategy::ExactOnly);
    CHECK(r1.all_positive == r2.all_positive);
    CHECK(r1.witness == r2.witness);
  }
}

TEST_CASE("low precision forces escalation but keeps the verdict") {
  ExpandOptions low;
  low.precision = 24;
  auto r = positivity_at(fixtures::askey(), parse_rat("2430275/1448618"), DegreeBox::cube(3, 10),
                         ScanStrategy::IntervalFirst, low);
  CHECK(r.escalations > 0);
  CHECK(r.all_positive);
}

TEST_CASE("T_p with p in (0,1) keeps positive coefficients positive") {
  const std::vector<RatFun> fs{parse_ratfun("1/(1-x-y)", {"x", "y"}), fixtures::askey(), fixtures::two_thirds()};
  for (const auto& f : fs) {
    DegreeBox box = DegreeBox::cube(f.arity(), f.arity() == 4 ? 3 : 5);
    REQUIRE(positivity_at(f, Rat(1), box, ScanStrategy::ExactOnly).all_positive);
    for (const Rat& p : {Rat(1, 3), Rat(1, 2), Rat(9, 10)})
      CHECK(positivity_at(f, p, box).all_positive);
  }
}

TEST_CASE("scan argument checks") {
  CHECK_THROWS_AS(positivity_at(fixtures::askey(), Rat(0), DegreeBox::cube(3, 1)), Error);
  CHECK_THROWS_AS(pmax_upper_bound(tp_transform(fixtures::askey(), SymbolicParam{}), DegreeBox::cube(3, 1)), Error);
}
