#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "poslab/error.hpp"
#include "poslab/seq.hpp"

using namespace poslab;

namespace {

Sequence central_binomials(std::size_t N) {
  Sequence s{Rat(1)};
  for (std::size_t n = 0; n < N; ++n) {
    Rat next = s.back() * Rat(static_cast<long>(4 * n + 2)) / Rat(static_cast<long>(n + 1));
    s.push_back(next);
  }
  return s;
}

Sequence from_formula(std::size_t N, auto term) {
  Sequence s;
  for (std::size_t n = 0; n <= N; ++n) s.push_back(term(static_cast<long>(n)));
  return s;
}

Rat ipow(long b, long e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), mpz_class(std::abs(b)).get_mpz_t(), static_cast<unsigned long>(e));
  if (b < 0 && e % 2) r = -r;
  return Rat(r);
}

// Recurrence with constant coefficients sum_i c[i] a(n+i) = 0.
Recurrence constant_recurrence(std::vector<long> c) {
  Recurrence r;
  for (long x : c) r.coeffs.push_back(RatPoly({Rat(x)}));
  return r;
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

bool rel_close(const Real& a, double b, double tol) { return abs(a - Real(b)) <= Real(tol) * abs(Real(b)); }

}  // namespace

TEST_CASE("paths") {
  PathSpec p = PathSpec::parse("1,1,0", "0,2,3", 3);
  CHECK(p.at(0) == Exponent{0, 2, 3});
  CHECK(p.at(4) == Exponent{4, 6, 3});
  CHECK(PathSpec::parse("1,1,0", "", 3).offset == Exponent{0, 0, 0});
  CHECK_THROWS_AS(PathSpec::parse("0,0", "", 2), Error);
  CHECK_THROWS_AS(PathSpec::parse("1,1", "", 3), Error);
}

TEST_CASE("central binomial diagonal") {
  Sequence s = extract(parse_ratfun("1/(1-x-y)", {"x", "y"}), Rat(1), PathSpec{{1, 1}, {0, 0}}, 4);
  CHECK(s == Sequence{Rat(1), Rat(2), Rat(6), Rat(20), Rat(70)});
  CHECK(extract(fixtures::askey(), Rat(2), PathSpec{{1, 1, 1}, {0, 0, 0}}, 0) == Sequence{Rat(1)});
}

TEST_CASE("extract agrees with the geometric-series oracle") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<unsigned> dir(0, 2), off(0, 2);
  auto check = [&](const RatFun& g, std::size_t arity) {
    PathSpec path;
    for (std::size_t i = 0; i < arity; ++i) {
      path.direction.push_back(dir(rng));
      path.offset.push_back(off(rng));
    }
    if (std::all_of(path.direction.begin(), path.direction.end(), [](unsigned d) { return d == 0; }))
      path.direction[0] = 1;
    const std::size_t N = 4;
    Sequence s = extract_path(g, path, N);
    DegreeBox box{path.at(N)};
    auto oracle = brute_expand(g, box);
    for (std::size_t n = 0; n <= N; ++n) CHECK(oracle(path.at(n)) == ParamPoly::constant(s[n]));
  };
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t arity = 1 + trial % 3;
    check(fixtures::random_ratfun(rng, arity), arity);
  }
  check(tp_transform(fixtures::askey(), Rat(19, 10)), 3);
  check(tp_transform(fixtures::two_thirds(), Rat(2)), 4);
}

TEST_CASE("guessing the central binomial recurrence") {
  auto rec = guess_recurrence(central_binomials(40));
  REQUIRE(rec);
  CHECK(rec->order() == 1);
  CHECK(rec->degree() == 1);
  // Proportional to (n+1) a(n+1) - (4n+2) a(n).
  const Rat scale = rec->coeffs[1].coeff(0);
  CHECK(rec->coeffs[1] == RatPoly({Rat(1), Rat(1)}) * RatPoly({scale}));
  CHECK(rec->coeffs[0] == RatPoly({Rat(-2), Rat(-4)}) * RatPoly({scale}));
  CHECK(rec->verified_horizon >= 10);

  auto chars = char_analysis(*rec);
  REQUIRE(chars.roots.size() == 1);
  CHECK(chars.roots[0].real);
  CHECK(rel_close(chars.roots[0].re, 4, 1e-60));
  CHECK(classify_sign(chars, Real(1)) == SignBehavior::UltimatelyPositive);
  CHECK(classify_sign(chars, Real(-1)) == SignBehavior::UltimatelyNegative);
  CHECK(classify_sign(chars, std::nullopt) == SignBehavior::Unknown);

  Sequence more = extend_by_recurrence(*rec, central_binomials(20), 60);
  CHECK(more == central_binomials(60));
}

TEST_CASE("constant and geometric sequences") {
  auto ones = guess_recurrence(Sequence(40, Rat(1)));
  REQUIRE(ones);
  CHECK(ones->order() == 1);
  CHECK(ones->degree() == 0);
  CHECK(ones->coeffs[0] == -ones->coeffs[1]);
  CHECK(rel_close(char_analysis(*ones).roots.at(0).re, 1, 1e-60));

  Sequence threes = from_formula(60, [](long n) { return ipow(3, n); });
  KEstimate k = estimate_K(threes, Real(3), Real(0), false);
  for (const auto& [n, q] : k.trend) CHECK(q == 1);
  CHECK(k.estimate == 1);
  CHECK(k.spread == 0);
  CHECK(kind_of([&] { estimate_K(threes, Real(4), Real(0), false); }) == ErrorKind::GrowthMismatch);
}

TEST_CASE("guard terms reject recurrences that stop holding") {
  // Fibonacci for 60 terms, then one term off.
  Sequence fib{Rat(0), Rat(1)};
  while (fib.size() < 60) fib.push_back(fib[fib.size() - 1] + fib[fib.size() - 2]);
  auto rec = guess_recurrence(fib);
  REQUIRE(rec);
  CHECK(rec->order() == 2);
  for (std::size_t bad : {59u, 55u, 50u}) {
    Sequence broken = fib;
    broken[bad] += 1;
    auto r = guess_recurrence(broken);
    if (r) CHECK(r->annihilates(broken));
  }

  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> d(-50, 50);
  for (int trial = 0; trial < 10; ++trial) {
    Sequence noise;
    for (int i = 0; i < 45; ++i) noise.push_back(Rat(d(rng)));
    auto r = guess_recurrence(noise, {2, 2, 10});
    if (r) CHECK(r->annihilates(noise));
  }
  CHECK(kind_of([] { guess_recurrence(Sequence(20, Rat(1))); }) == ErrorKind::InsufficientData);
}

TEST_CASE("characteristic roots") {
  // x^2 - x - 1
  auto fib = char_analysis(constant_recurrence({-1, -1, 1}));
  REQUIRE(fib.roots.size() == 2);
  CHECK(abs(fib.roots[0].re - (1 + sqrt(Real(5))) / 2) < Real(1e-60));
  CHECK(fib.roots[0].dominant);
  CHECK_FALSE(fib.roots[1].dominant);

  // x^2 - 2x + 5: roots 1 +- 2i, no real root of modulus sqrt 5.
  auto pair = char_analysis(constant_recurrence({5, -2, 1}));
  CHECK(pair.dominant().size() == 2);
  CHECK_FALSE(pair.roots[0].real);
  CHECK(abs(pair.dominant_modulus - sqrt(Real(5))) < Real(1e-60));
  CHECK(classify_sign(pair, Real(1)) == SignBehavior::Oscillating);

  // (x - 2)^2 (x + 1)
  auto dbl = char_analysis(constant_recurrence({4, 0, -3, 1}));
  REQUIRE(dbl.roots.size() == 2);
  CHECK(dbl.roots[0].multiplicity == 2);
  CHECK(rel_close(dbl.roots[0].re, 2, 1e-60));

  auto neg = char_analysis(constant_recurrence({5, 1}));
  CHECK(classify_sign(neg, Real(1)) == SignBehavior::Oscillating);

  // x^2 - 9 has +3 and -3 with equal modulus.
  auto both = char_analysis(constant_recurrence({-9, 0, 1}));
  CHECK(both.dominant().size() == 2);
  CHECK(classify_sign(both, Real(1)) == SignBehavior::Unknown);

  Recurrence lost;
  lost.coeffs = {RatPoly({Rat(1), Rat(1)}), RatPoly({Rat(1)})};
  CHECK(kind_of([&] { char_analysis(lost); }) == ErrorKind::DegenerateLeading);
}

TEST_CASE("leading roots follow the sequence") {
  // 3 (-3)^n + 3^n under a(n+2) = 9 a(n): mostly the negative root.
  Sequence mixed = from_formula(60, [](long n) { return Rat(3 * ipow(-3, n) + ipow(3, n)); });
  auto chars = char_analysis(constant_recurrence({-9, 0, 1}));
  select_leading(chars, mixed);
  REQUIRE(chars.leading().size() == 1);
  CHECK(rel_close(chars.leading().front()->re, -3, 1e-60));
  CHECK(classify_sign(chars, Real(1)) == SignBehavior::Oscillating);

  // 2^n under a recurrence that also admits (-7)^n: the larger root is absent.
  Sequence twos = from_formula(60, [](long n) { return ipow(2, n); });
  auto wide = char_analysis(constant_recurrence({-14, 5, 1}));
  CHECK(rel_close(wide.dominant_modulus, 7, 1e-60));
  select_leading(wide, twos);
  CHECK(rel_close(wide.leading_modulus, 2, 1e-60));
  REQUIRE(wide.leading().size() == 1);
  CHECK(rel_close(wide.leading().front()->re, 2, 1e-60));
  CHECK(classify_sign(wide, Real(1)) == SignBehavior::UltimatelyPositive);
}

TEST_CASE("alpha is read off the tail") {
  auto a = analyze(central_binomials(120));
  REQUIRE(a);
  CHECK(rel_close(a->rho, 4, 1e-60));
  CHECK(a->alpha.is_snapped);
  CHECK(a->alpha.snapped == Rat(-1, 2));
  // 4^n / sqrt(pi n)
  CHECK(rel_close(a->K.estimate, 1 / std::sqrt(3.14159265358979), 1e-2));
  CHECK(a->sign == SignBehavior::UltimatelyPositive);

  CHECK(snap_rational(-0.6668) == Rat(-2, 3));
  CHECK(snap_rational(1.4993) == Rat(3, 2));
  CHECK_FALSE(snap_rational(0.3, 2, 1e-2));
}

TEST_CASE("the cubic function oscillates on its diagonal at p = 2") {
  Sequence s = extract(fixtures::askey(), Rat(2), PathSpec{{1, 1, 1}, {0, 0, 0}}, 70);
  for (std::size_t n = 1; n < s.size(); ++n) CHECK(sgn(s[n]) == (n % 2 ? -1 : 1));
  auto a = analyze(s);
  REQUIRE(a);
  CHECK(a->recurrence.order() == 3);
  CHECK(rel_close(a->rho, -27, 1e-60));
  CHECK(a->sign == SignBehavior::Oscillating);
}

TEST_CASE("a larger characteristic root can be absent from a section") {
  Sequence s = extract(fixtures::sixty_four(), Rat(10), PathSpec{{1, 1, 1, 0}, {0, 0, 0, 0}}, 70);
  auto a = analyze(s, {4, 6, 10});
  REQUIRE(a);
  CHECK(rel_close(a->chars.dominant_modulus, 10365.0 + 2.0 / 3.0, 1e-9));
  CHECK(rel_close(a->rho, std::pow(1 + 50.0 / 3.0, 3), 1e-9));
  CHECK(a->sign == SignBehavior::UltimatelyPositive);
}

TEST_CASE("generalised binomials") {
  CHECK(binomial(5, 2) == 10);
  CHECK(binomial(2, 5) == 0);
  CHECK(binomial(-1, 3) == -1);
  CHECK(binomial(-2, 2) == 3);
  CHECK(binomial(3, -1) == 0);
  CHECK(binomial(0, 0) == 1);
}

TEST_CASE("closed triple sum against the expansion") {
  CHECK(askey_coeff_closed_sum(0, 0, 0, Rat(1, 3)) == 1);
  for (Rat eps : {Rat(1, 3), Rat(1, 10)}) {
    auto box = expand_exact(tp_transform(fixtures::askey(), Rat(2) - eps), DegreeBox::cube(3, 4));
    for (unsigned n = 0; n <= 4; ++n)
      for (unsigned m = 0; m <= 4; ++m)
        for (unsigned k = 0; k <= 4; ++k) CHECK(askey_coeff_closed_sum(n, m, k, eps) == box({n, m, k}));
  }
}

TEST_CASE("polynomial fits") {
  Sequence sq = from_formula(12, [](long n) { return Rat(n * n + 1); });
  auto q = fit_polynomial(sq);
  REQUIRE(q);
  CHECK(*q == RatPoly({Rat(1), Rat(0), Rat(1)}));
  CHECK_FALSE(fit_polynomial(from_formula(12, [](long n) { return ipow(2, n); })));

  // With y = z = w = 0 the transformed function is 1/(1-x), so a_{n,0,0,0} = 1.
  RatPoly s0 = section_poly_fit(fixtures::two_thirds(), Rat(2), {0, 0, 0});
  CHECK(s0 == RatPoly({Rat(1)}));
  // Degree i+j+k with leading coefficient p^(2(i+j+k)) / 3^(i+j+k) / (i! j! k!).
  RatPoly s1 = section_poly_fit(fixtures::two_thirds(), Rat(2), {1, 0, 0});
  CHECK(s1 == RatPoly({Rat(1), Rat(4, 3)}));
  RatPoly s3 = section_poly_fit(fixtures::two_thirds(), Rat(3, 2), {1, 1, 1});
  CHECK(s3.degree() == 3);
  CHECK(s3.coeff(3) == Rat(729, 64) / 27);
  RatPoly s2 = section_poly_fit(fixtures::two_thirds(), Rat(2), {2, 0, 1});
  CHECK(s2.degree() == 3);
  CHECK(s2.coeff(3) == Rat(64, 27) / 2);
  CHECK(kind_of([] { section_poly_fit(parse_ratfun("1/(1-2*x)", {"x"}), Rat(1), {}, 6); }) ==
        ErrorKind::NotPolynomial);
}
