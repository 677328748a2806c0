#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "poslab/algebraic.hpp"
#include "poslab/error.hpp"
#include "poslab/interval.hpp"
#include "poslab/roots.hpp"

using namespace poslab;

namespace {

RatPoly P(std::initializer_list<int> c) {
  std::vector<Rat> v;
  for (int x : c) v.emplace_back(x);
  return RatPoly(v);
}

Rat R(const char* s) { return parse_rat(s); }

bool inside(const RootInterval& iv, double lo, double hi) { return to_double(iv.lo) > lo && to_double(iv.hi) < hi; }

}  // namespace

TEST_CASE("rationals stay canonical") {
  CHECK(to_string(R("6/4")) == "3/2");
  CHECK(to_string(R("-0/5")) == "0/1");
  CHECK(to_string(R("7")) == "7/1");
  CHECK_THROWS_AS(parse_rat("1/0"), Error);
  CHECK_THROWS_AS(parse_rat("abc"), Error);
  CHECK(floor_rat(R("-7/2")) == -4);
}

TEST_CASE("poly_eval") {
  CHECK(P({1, 0, 3, -2})(Rat(1)) == 2);
  CHECK(RatPoly()(R("7/3")) == 0);
  CHECK(P({3, 0, 6, 0, -1})(Rat(0)) == 3);
  CHECK(P({1, 0, 3, -2})(Rat(2)) == -3);
}

TEST_CASE("polynomial arithmetic is canonical") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> c(-5, 5), d(0, 6);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Rat> a(d(rng) + 1), b(d(rng) + 1);
    for (auto& x : a) x = Rat(c(rng), 1 + std::abs(c(rng)));
    for (auto& x : b) x = Rat(c(rng), 1 + std::abs(c(rng)));
    RatPoly qa(a), qb(b);
    CHECK((qa + qb) - qb == qa);
    RatPoly s = qa - qa;
    CHECK(s.is_zero());
    CHECK(s.degree() == -1);
    if (!qa.is_zero()) CHECK(qa.leading() != 0);
    if (!qb.is_zero()) {
      auto [q, r] = divmod(qa, qb);
      CHECK(q * qb + r == qa);
      CHECK(r.degree() < qb.degree());
    }
  }
  CHECK(P({1, 0, 3, -2}).to_string() == "1+3*p^2-2*p^3");
}

TEST_CASE("gcd and square-free part") {
  RatPoly a = P({-1, 1}) * P({-1, 1}) * P({2, 1});  // (p-1)^2 (p+2)
  CHECK(gcd(a, derivative(a)) == P({-1, 1}));
  CHECK(squarefree_part(a) == P({-1, 1}) * P({2, 1}));
  CHECK(taylor_shift(P({0, 0, 1}), Rat(1)) == P({1, 2, 1}));
  CHECK(compose(P({0, 0, 1}), P({1, 1})) == P({1, 2, 1}));
}

TEST_CASE("isolate_real_roots: examples") {
  auto r1 = isolate_real_roots(P({-1, 0, 1}), Range::positive());
  REQUIRE(r1.size() == 1);
  CHECK(r1[0].lo <= 1);
  CHECK(r1[0].hi >= 1);

  auto r2 = isolate_real_roots(P({-1, 0, -3, 2}), Range::positive());
  REQUIRE(r2.size() == 1);
  RootInterval t2 = refine(primitive_part(P({-1, 0, -3, 2})), r2[0], Rat(1, 1000));
  CHECK(inside(t2, 1.67, 1.69));

  auto r3 = isolate_real_roots(P({-3, 0, -6, 0, 1}), Range::positive());
  REQUIRE(r3.size() == 1);
  RootInterval t3 = refine(primitive_part(P({-3, 0, -6, 0, 1})), r3[0], Rat(1, 1000));
  CHECK(inside(t3, 2.53, 2.55));

  auto all = isolate_real_roots(P({-3, 0, -6, 0, 1}));
  CHECK(all.size() == 2);
}

TEST_CASE("isolate_real_roots: counts match polynomials with known roots") {
  // Oracle: build q = c * prod (b_i x - a_i)^{m_i} * prod (x^2 + s_j) from chosen
  // distinct rationals a_i/b_i and positive s_j; the real roots are exactly the a_i/b_i.
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> num(-12, 12), den(1, 5), mult(1, 2), nroots(0, 4), nquad(0, 2), s(1, 9);
  for (int trial = 0; trial < 500; ++trial) {
    std::set<Rat> roots;
    RatPoly q = P({1});
    int want = nroots(rng);
    while (static_cast<int>(roots.size()) < want) {
      Rat r(num(rng), den(rng));
      r.canonicalize();
      if (!roots.insert(r).second) continue;
      int m = mult(rng);
      for (int k = 0; k < m && q.degree() < 8; ++k) q *= RatPoly({-r, Rat(1)});
    }
    int quads = nquad(rng);
    for (int j = 0; j < quads && q.degree() <= 6; ++j) q *= P({s(rng), 0, 1});
    if (q.degree() > 8) continue;
    q *= Rat(num(rng) == 0 ? 1 : num(rng));
    if (q.is_zero()) continue;

    auto got = isolate_real_roots(q, Range{Rat(-13), Rat(13)});
    REQUIRE(got.size() == roots.size());
    auto it = roots.begin();
    for (std::size_t i = 0; i < got.size(); ++i, ++it) {
      CHECK(got[i].lo <= *it);
      CHECK(*it <= got[i].hi);
      if (i) CHECK(got[i - 1].hi < got[i].lo);
    }

    std::size_t positive = std::count_if(roots.begin(), roots.end(), [](const Rat& r) { return r > 0; });
    CHECK(isolate_real_roots(q, Range::positive()).size() == positive);
  }
}

TEST_CASE("isolating intervals agree with dense sign scans") {
  // Dense evaluation on a grid much finer than the interval widths: each
  // returned interval carries a sign change of the square-free part.
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> c(-9, 9), d(1, 8);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Rat> v(d(rng) + 1);
    for (auto& x : v) x = c(rng);
    if (v.back() == 0) v.back() = 1;
    RatPoly q(v);
    ZPoly sf = primitive_part(squarefree_part(q));
    auto roots = isolate_real_roots(q, Range{Rat(-20), Rat(20)});
    for (const auto& iv : roots) {
      if (iv.exact()) {
        CHECK(q(iv.lo) == 0);
        continue;
      }
      CHECK(sign_at(sf, iv.lo) * sign_at(sf, iv.hi) < 0);
    }
    const int steps = 4000;
    const Rat step(40, steps);
    int scan = 0, prev = 0;
    for (int k = 0; k <= steps; ++k) {
      int sg = sign_at(sf, Rat(-20) + step * k);
      if (sg == 0) continue;  // simple root on the grid; neighbours differ
      if (prev != 0 && sg != prev) ++scan;
      prev = sg;
    }
    bool separated = true;
    for (std::size_t i = 0; i < roots.size(); ++i) {
      RootInterval fine = roots[i].exact() ? roots[i] : refine(sf, roots[i], step / 8);
      roots[i] = fine;
      if (i && roots[i].lo - roots[i - 1].hi <= 2 * step) separated = false;
    }
    if (separated)
      CHECK(scan == static_cast<int>(roots.size()));
    else
      CHECK(scan <= static_cast<int>(roots.size()));
  }
}

TEST_CASE("smallest_nonpositivity_point") {
  auto a = smallest_nonpositivity_point(P({1, 0, 3, -2}));
  REQUIRE(a);
  CHECK_FALSE(a->at_origin);
  CHECK(inside(a->where, 1.67, 1.69));
  CHECK(a->where.width() <= default_tolerance());

  CHECK_FALSE(smallest_nonpositivity_point(P({1, 1})));

  RatPoly q3({Rat(1), Rat(0), Rat(6), Rat(-40, 27), Rat(-13, 27)});
  auto c = smallest_nonpositivity_point(q3);
  REQUIRE(c);
  CHECK(inside(c->where, 2.35, 2.37));

  CHECK_THROWS_AS(smallest_nonpositivity_point(RatPoly()), Error);

  auto origin = smallest_nonpositivity_point(P({-1, 1}));
  REQUIRE(origin);
  CHECK(origin->at_origin);
  CHECK(origin->where.lo == 0);

  // Double root touching zero: (p-2)^2 (p+1) is nonpositive only at 2.
  auto touch = smallest_nonpositivity_point(P({-2, 1}) * P({-2, 1}) * P({1, 1}));
  REQUIRE(touch);
  CHECK(touch->where.lo <= 2);
  CHECK(touch->where.hi >= 2);
}

TEST_CASE("compare_roots is exact") {
  ZPoly a = primitive_part(P({-2, 0, 1}));           // sqrt 2
  ZPoly b = primitive_part(P({-2, 0, 1}) * P({3, 1}));
  auto ia = isolate_real_roots(a, Range::positive())[0];
  auto ib = isolate_real_roots(b, Range::positive())[0];
  CHECK(compare_roots(a, ia, b, ib) == 0);
  ZPoly c = primitive_part(P({-3, 0, 1}));
  auto ic = isolate_real_roots(c, Range::positive())[0];
  CHECK(compare_roots(a, ia, c, ic) == -1);
  CHECK(compare_roots(c, ic, a, ia) == 1);
}

TEST_CASE("convergents contain the printed fractions") {
  AlgebraicNumber a(P({-1, 0, -3, 2}), Rat(1), Rat(2));
  auto ca = convergents(a, 20);
  CHECK(std::find(ca.begin(), ca.end(), R("2430275/1448618")) != ca.end());

  AlgebraicNumber b(P({-3, 0, -6, 0, 1}), Rat(2), Rat(3));
  auto cb = convergents(b, 20);
  CHECK(std::find(cb.begin(), cb.end(), R("730647/287378")) != cb.end());

  AlgebraicNumber two(P({-2, 1}), Rat(1), Rat(3));
  auto c2 = convergents(two, 1);
  REQUIRE(c2.size() == 1);
  CHECK(c2[0] == 2);
  CHECK(convergents(two, 5).size() == 1);

  AlgebraicNumber sqrt2(P({-2, 0, 1}), Rat(1), Rat(2));
  auto pq = partial_quotients(sqrt2, 6);
  CHECK(pq == std::vector<BigInt>{1, 2, 2, 2, 2, 2});

  CHECK_THROWS_AS(AlgebraicNumber(P({-2, 0, 1}), Rat(-2), Rat(2)), Error);
}

TEST_CASE("convergent quality") {
  std::vector<AlgebraicNumber> nums{
      AlgebraicNumber(P({-1, 0, -3, 2}), Rat(1), Rat(2)),
      AlgebraicNumber(P({-3, 0, -6, 0, 1}), Rat(2), Rat(3)),
      AlgebraicNumber(P({-5, 1, 0, 1}), Rat(1), Rat(2)),
  };
  for (const auto& a : nums) {
    auto cs = convergents(a, 30);
    REQUIRE(cs.size() == 30);
    RootInterval fine = a.refined(Rat(1, BigInt(1) << 400));
    for (std::size_t i = 0; i + 1 < cs.size(); ++i) {
      const Rat& c = cs[i];
      Rat bound(BigInt(1), c.get_den() * cs[i + 1].get_den());
      Rat err_hi = abs(fine.hi - c), err_lo = abs(fine.lo - c);
      CHECK(std::max(err_hi, err_lo) < bound);
      int side = sgn(fine.lo - c);
      int side_next = sgn(fine.lo - cs[i + 1]);
      CHECK(side == -side_next);
    }
  }
}

TEST_CASE("interval_eval encloses exact values") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> c(-50, 50), d(0, 8), den(1, 97);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<Rat> v(d(rng) + 1);
    for (auto& x : v) x = Rat(c(rng), den(rng));
    RatPoly q(v);
    Rat x(c(rng), den(rng));
    x.canonicalize();
    for (mpfr_prec_t prec : {53, 128, 256}) {
      IntervalScalar ix(x, prec);
      CHECK(interval_eval(q, ix).contains(q(x)));
    }
  }
  CHECK(interval_eval(RatPoly::identity(), IntervalScalar(Rat(1))).contains(Rat(1)));
  CHECK(interval_eval(P({1, 0, 3, -2}), IntervalScalar(Rat(2))).contains(Rat(-3)));
  IntervalScalar wide = interval_eval(P({-2, 0, 1}), IntervalScalar(Rat(1), Rat(2)));
  CHECK(wide.contains(IntervalScalar(Rat(-1), Rat(2))));
}

TEST_CASE("interval arithmetic rounds outward") {
  IntervalScalar third(Rat(1, 3), 64);
  IntervalScalar sum(Rat(0), 64);
  for (int i = 0; i < 3; ++i) sum += third;
  CHECK(sum.contains(Rat(1)));
  CHECK(sum.certainly_positive());
  IntervalScalar neg = IntervalScalar(Rat(-2), Rat(1)) * IntervalScalar(Rat(-3), Rat(4));
  CHECK(neg.contains(Rat(-8)));
  CHECK(neg.contains(Rat(6)));
  CHECK_FALSE(neg.contains(Rat(9)));
  CHECK_THROWS_AS(IntervalScalar(Rat(1)) / IntervalScalar(Rat(-1), Rat(1)), Error);
}
