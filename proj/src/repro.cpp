#include "poslab/repro.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>

#include "poslab/algebraic.hpp"
#include "poslab/error.hpp"
#include "poslab/scan.hpp"
#include "poslab/seq.hpp"

namespace poslab::repro {

namespace {

const std::vector<std::string> kXyz{"x", "y", "z"};
const std::vector<std::string> kXyzw{"x", "y", "z", "w"};

RatFun cubic() { return parse_ratfun("1/(1-x-y-z+4*x*y*z)", kXyz); }
RatFun two_thirds() { return parse_ratfun("1/(1-x-y-z-w+(2/3)*(x*y+x*z+x*w+y*z+y*w+z*w))", kXyzw); }
RatFun sixty_four() { return parse_ratfun("1/(1-x-y-z-w+(64/27)*(x*y*z+x*y*w+x*z*w+y*z*w))", kXyzw); }

const Rat kConvergent1 = parse_rat("2430275/1448618");
const Rat kConvergent2 = parse_rat("730647/287378");

std::string fmt(const Real& x, int digits = 10) { return x.str(digits); }

std::string fmt(double x, int digits = 4) {
  std::ostringstream s;
  s << std::setprecision(digits) << x;
  return s.str();
}

Real rel_err(const Real& got, const Real& want) { return abs(got - want) / abs(want); }

ParamPoly coefficient_poly(const RatFun& f, const Exponent& e) {
  return coeff<ParamPoly>(tp_transform(f, SymbolicParam{}), e);
}

Outcome identity_half(unsigned) {
  RatFun t = tp_transform(cubic(), Rat(1, 2));
  bool ok = ratfun_equal(t, parse_ratfun("1/(1-x-y-z+(3/4)*(x*y+x*z+y*z))", kXyz));
  return {ok, "T_(1/2) f = " + t.to_string()};
}

Outcome identity_root3(unsigned) {
  RatFun t = tp_transform(two_thirds(), parse_transform_param("alg:p^2-3"));
  RatFun want = parse_ratfun("1/(1-x-y-z-w+2*(x*y*z+x*y*w+x*z*w+y*z*w)+4*x*y*z*w)", kXyzw);
  want.mode = t.mode;
  return {ratfun_equal(t, want), "T_sqrt3 f = " + t.to_string()};
}

struct CoefficientCase {
  const char* name;
  RatFun f;
  Exponent cell;
  RatPoly stated;
};

std::vector<CoefficientCase> coefficient_cases() {
  return {{"f1", cubic(), {1, 1, 1}, parse_param_poly("1+3*p^2-2*p^3")},
          {"f2", two_thirds(), {1, 1, 1, 1}, parse_param_poly("3+6*p^2-p^4")},
          {"f3", sixty_four(), {1, 1, 1, 1}, parse_param_poly("-13/27*p^4-40/27*p^3+6*p^2+1")}};
}

Outcome coefficient_polys(unsigned) {
  Outcome out{true, ""};
  for (const auto& c : coefficient_cases()) {
    ParamPoly got = coefficient_poly(c.f, c.cell);
    const bool ok = got == c.stated;
    out.pass = out.pass && ok;
    out.detail += std::string(out.detail.empty() ? "" : "; ") + c.name + (ok ? " matches" : " differs: computed " +
                  got.to_string("p") + ", stated " + c.stated.to_string("p"));
  }
  return out;
}

Outcome threshold_roots(unsigned) {
  const double windows[3][2] = {{1.67, 1.69}, {2.53, 2.55}, {2.35, 2.37}};
  Outcome out{true, ""};
  auto cases = coefficient_cases();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    auto pt = smallest_nonpositivity_point(coefficient_poly(cases[i].f, cases[i].cell));
    const bool ok = pt && !pt->at_origin && to_double(pt->where.lo) > windows[i][0] &&
                    to_double(pt->where.hi) < windows[i][1];
    out.pass = out.pass && ok;
    out.detail += std::string(out.detail.empty() ? "" : ", ") + cases[i].name + " " +
                  (pt ? to_decimal(pt->where.midpoint(), 12) : std::string("none"));
  }
  return out;
}

Outcome convergent_lists(unsigned) {
  struct Case {
    RatPoly minpoly;
    Rat lo, hi, target;
    double tol;
  };
  const Case cases[] = {{parse_param_poly("2*p^3-3*p^2-1"), Rat(1), Rat(2), kConvergent1, 1e-14},
                        {parse_param_poly("p^4-6*p^2-3"), Rat(2), Rat(3), kConvergent2, 1e-12}};
  Outcome out{true, ""};
  for (const auto& c : cases) {
    AlgebraicNumber a(c.minpoly, c.lo, c.hi);
    auto cs = convergents(a, 40);
    const auto it = std::find(cs.begin(), cs.end(), c.target);
    const bool listed = it != cs.end();
    RootInterval fine = a.refined(Rat(1, BigInt(1) << 200));
    const Rat err = std::max(abs(fine.lo - c.target), abs(fine.hi - c.target));
    const bool close = err < Rat(c.tol);
    out.pass = out.pass && listed && close;
    out.detail += std::string(out.detail.empty() ? "" : "; ") + to_string(c.target);
    if (listed)
      out.detail += " is convergent h_" + std::to_string(it - cs.begin()) + ", " +
                    (c.target < fine.lo ? "below" : "above") + " the root by " + fmt(to_double(err), 3) +
                    " (tolerance " + fmt(c.tol, 1) + ")";
    else
      out.detail += " not among the first 40 convergents";
  }
  return out;
}

Outcome pmax_boxes(unsigned threads) {
  ScanOptions opts;
  opts.expand.threads = threads;
  PBound a = pmax_upper_bound(cubic(), DegreeBox::cube(3, 10), opts);
  PBound b = pmax_upper_bound(two_thirds(), DegreeBox::cube(4, 6), opts);
  auto in = [](const PBound& x, double lo, double hi) {
    return x.bound && !x.at_origin && to_double(x.bound->lo) > lo && to_double(x.bound->hi) < hi;
  };
  const bool ok = in(a, 1.67, 1.69) && a.witness == Exponent{1, 1, 1} && in(b, 2.53, 2.55) &&
                  b.witness == Exponent{1, 1, 1, 1};
  auto show = [](const PBound& x) {
    if (!x.bound) return std::string("no bound");
    std::string w;
    for (unsigned e : x.witness) w += (w.empty() ? "" : ",") + std::to_string(e);
    return to_decimal(x.bound->midpoint(), 10) + " at (" + w + ")";
  };
  return {ok, "10^3: " + show(a) + "; 6^4: " + show(b)};
}

Outcome fixed_scans(unsigned threads) {
  ExpandOptions opts;
  opts.threads = threads;
  ScanReport a = positivity_at(cubic(), kConvergent1, DegreeBox::cube(3, 60), ScanStrategy::IntervalFirst, opts);
  ScanReport b = positivity_at(two_thirds(), kConvergent2, DegreeBox::cube(4, 25), ScanStrategy::IntervalFirst, opts);
  auto show = [](const ScanReport& r) {
    return std::string(r.all_positive ? "all positive" : "nonpositive cell") + " (" +
           std::to_string(r.cells_scanned) + " cells, " + std::to_string(r.escalations) + " escalated)";
  };
  return {a.all_positive && b.all_positive, "60^3: " + show(a) + "; 25^4: " + show(b)};
}

Outcome sixty_four_profile(unsigned threads) {
  ScanOptions opts;
  opts.expand.threads = threads;
  auto prof = bound_vs_box_profile(sixty_four(), {DegreeBox::cube(4, 4), DegreeBox::cube(4, 6), DegreeBox::cube(4, 8)},
                                   opts);
  Outcome out{true, ""};
  for (std::size_t i = 0; i < prof.size(); ++i) {
    const auto& b = prof[i];
    const bool ok = b.bound && to_double(b.bound->hi) <= 2.37 && (i == 0 || compare_bounds(b, prof[i - 1]) <= 0);
    out.pass = out.pass && ok;
    out.detail += std::string(out.detail.empty() ? "" : ", ") +
                  (b.bound ? to_decimal(b.bound->midpoint(), 10) : std::string("none"));
  }
  return out;
}

const CharRoot* leading_real(const CharAnalysis& chars) {
  auto lead = chars.leading();
  return lead.size() == 1 ? lead.front() : nullptr;
}

Outcome threshold_oscillation(unsigned threads) {
  ExpandOptions opts;
  opts.threads = threads;
  Sequence s = extract(cubic(), Rat(2), PathSpec{{1, 1, 1}, {0, 0, 0}}, 300, opts);
  auto rec = guess_recurrence(s, {4, 4, 10});
  if (!rec) return {false, "no recurrence with order <= 4, degree <= 4"};
  CharAnalysis chars = char_analysis(*rec);
  select_leading(chars, s);
  const CharRoot* lead = leading_real(chars);
  const bool root_ok = lead && lead->real && rel_err(lead->re, Real(-27)) < Real(1e-6);
  KEstimate k = estimate_K(s, Real(-27), Real(-2) / 3, true);
  const SignBehavior sign = classify_sign(chars, k.estimate);
  std::string dom;
  for (const auto* r : chars.dominant()) dom += (dom.empty() ? "" : ",") + fmt(r->re, 8);
  return {root_ok && sign == SignBehavior::Oscillating && k.estimate >= Real(0.24),
          "order " + std::to_string(rec->order()) + ", degree " + std::to_string(rec->degree()) +
              "; dominant {" + dom + "}, leading " + (lead ? fmt(lead->re, 8) : std::string("ambiguous")) +
              "; sign " + to_string(sign) + "; K " + fmt(k.estimate, 6)};
}

struct SectionCase {
  std::string name;
  std::function<RatFun()> f;
  Rat p;
  PathSpec path;
  std::size_t N;
  GuessOptions guess;
  Real expected;
};

std::vector<SectionCase> section_cases() {
  std::vector<SectionCase> out;
  const Rat eps(1, 10);
  const Rat p3 = Rat(2) - eps;
  const Real base3 = 3 - to_real(eps);
  for (unsigned i = 0; i <= 2; ++i)
    for (unsigned j = 0; j <= 3; ++j)
      out.push_back({"a(n,n+" + std::to_string(i) + "," + std::to_string(j) + ")", cubic, p3,
                     PathSpec{{1, 1, 0}, {0, i, j}}, 120, {3, 12, 10}, base3 * base3});
  for (unsigned i = 0; i <= 2; ++i)
    for (unsigned j = 0; j <= 2; ++j)
      out.push_back({"a(n,n+" + std::to_string(i) + ",n+" + std::to_string(j) + ")", cubic, p3,
                     PathSpec{{1, 1, 1}, {0, i, j}}, 120, {3, 12, 10}, base3 * base3 * base3});
  for (const Rat& p : {Rat(2), Rat(299, 100)}) {
    const Real rp = to_real(p);
    const Real sq = (rp + sqrt(Real(3))) * (rp + sqrt(Real(3))) / 3;
    const std::string at = " p=" + to_string(p);
    for (unsigned i = 0; i <= 1; ++i)
      for (unsigned j = 0; j <= 2; ++j)
        for (unsigned k = 0; k <= 2; ++k)
          out.push_back({"a(n,n+" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")" + at,
                         two_thirds, p, PathSpec{{1, 1, 0, 0}, {0, i, j, k}}, 120, {3, 12, 10}, sq});
    for (unsigned j = 0; j <= 1; ++j)
      for (unsigned k = 0; k <= 1; ++k)
        out.push_back({"a(n,n,n+" + std::to_string(j) + "," + std::to_string(k) + ")" + at, two_thirds, p,
                       PathSpec{{1, 1, 1, 0}, {0, 0, j, k}}, 100, {4, 12, 10}, (1 + rp) * (1 + rp) * (1 + rp)});
  }
  for (const Rat& p : {Rat(2), Rat(3)}) {
    const Real g = 1 + 5 * to_real(p) / 3;
    out.push_back({"64/27 a(n,n,n,0) p=" + to_string(p), sixty_four, p, PathSpec{{1, 1, 1, 0}, {0, 0, 0, 0}}, 100,
                   {4, 8, 10}, g * g * g});
  }
  return out;
}

Outcome section_growth(unsigned threads) {
  ExpandOptions opts;
  opts.threads = threads;
  Outcome out{true, ""};
  std::size_t passed = 0, total = 0;
  for (const auto& c : section_cases()) {
    ++total;
    Sequence s = extract(c.f(), c.p, c.path, c.N, opts);
    auto rec = guess_recurrence(s, c.guess);
    std::string why;
    if (rec) {
      CharAnalysis chars = char_analysis(*rec);
      select_leading(chars, s);
      const CharRoot* lead = leading_real(chars);
      if (lead && lead->real && rel_err(lead->re, c.expected) < Real(1e-6)) {
        ++passed;
        continue;
      }
      why = "root " + (lead ? fmt(lead->re) : std::string("ambiguous")) + " vs " + fmt(c.expected);
    } else {
      why = "no recurrence";
    }
    out.pass = false;
    out.detail += c.name + ": " + why + "; ";
  }
  out.detail += std::to_string(passed) + "/" + std::to_string(total) + " sections match";
  return out;
}

Outcome diagonal_quotients(unsigned threads) {
  const Rat p(299, 100);
  const std::size_t kExtracted = 60, N = 200, kLong = 2000;
  ExpandOptions opts;
  opts.threads = threads;
  opts.max_cells = 20'000'000;
  Sequence s = extract(two_thirds(), p, PathSpec{{1, 1, 1, 1}, {0, 0, 0, 0}}, kExtracted, opts);
  auto rec = guess_recurrence(s, {4, 7, 10});
  if (!rec) return {false, "no recurrence with order <= 4, degree <= 7 from " + std::to_string(kExtracted + 1) + " terms"};
  Sequence full = extend_by_recurrence(*rec, s, kLong);
  const Real rp = to_real(p), p2 = rp * rp;
  const Real rho = 64 + (p2 - 9) * (2 * p2 * p2 + 9 * p2 + 189 - 2 * pow(p2 + 3, Real(3) / 2) * rp) / 27;
  auto q = [&](std::size_t n) { return to_real(full[n]) / (pow(rho, static_cast<long>(n)) * pow(Real(n), Real(-3) / 2)); };
  auto last30_spread = [&](std::size_t end, Real& lo, Real& hi) {
    lo = hi = q(end);
    for (std::size_t n = end - 29; n < end; ++n) {
      lo = min(lo, q(n));
      hi = max(hi, q(n));
    }
    return (hi - lo) / hi;
  };
  CharAnalysis chars = char_analysis(*rec);
  const bool root_ok = rel_err(chars.dominant_modulus, rho) < Real(1e-6);
  std::size_t first_bad = 0;
  for (std::size_t n = 20; n <= N && !first_bad; ++n)
    if (q(n) <= 0) first_bad = n;
  Real lo, hi, long_lo, long_hi;
  const Real spread = last30_spread(N, lo, hi);
  const Real long_spread = last30_spread(kLong, long_lo, long_hi);
  return {root_ok && !first_bad && spread < Real(0.15),
          "recurrence order " + std::to_string(rec->order()) + ", degree " + std::to_string(rec->degree()) +
              " from " + std::to_string(kExtracted + 1) + " terms; rho " + fmt(rho, 12) +
              (root_ok ? " (dominant root)" : " (NOT the dominant root)") + "; q_n " +
              (first_bad ? "nonpositive first at n=" + std::to_string(first_bad) : std::string("positive")) +
              " on [20,200]; last 30 to 200 in [" + fmt(lo, 6) + ", " + fmt(hi, 6) + "], spread " +
              fmt(spread * 100, 3) + "%; extended to " + std::to_string(kLong) + ": last 30 in [" + fmt(long_lo, 6) +
              ", " + fmt(long_hi, 6) + "], spread " + fmt(long_spread * 100, 3) + "%"};
}

Outcome triple_sum(unsigned threads) {
  const Rat eps(1, 3);
  ExpandOptions opts;
  opts.threads = threads;
  auto box = expand_exact(tp_transform(cubic(), Rat(2) - eps), DegreeBox::cube(3, 6), opts);
  std::size_t mismatches = 0;
  std::string first;
  for (unsigned n = 0; n <= 6; ++n)
    for (unsigned m = 0; m <= 6; ++m)
      for (unsigned k = 0; k <= 6; ++k)
        if (askey_coeff_closed_sum(n, m, k, eps) != box({n, m, k})) {
          if (!mismatches)
            first = " first at (" + std::to_string(n) + "," + std::to_string(m) + "," + std::to_string(k) + ")";
          ++mismatches;
        }
  return {mismatches == 0, std::to_string(343 - mismatches) + "/343 cells agree" + first};
}

Outcome section_polynomials(unsigned threads) {
  ExpandOptions opts;
  opts.threads = threads;
  Outcome out{true, ""};
  std::size_t degree_ok = 0, lead_ok = 0, total = 0;
  std::string degrees;
  auto factorial = [](unsigned n) {
    long r = 1;
    for (unsigned t = 2; t <= n; ++t) r *= t;
    return r;
  };
  for (const Rat& p : {Rat(3, 2), Rat(2)})
    for (unsigned i = 0; i <= 1; ++i)
      for (unsigned j = 0; j <= 1; ++j)
        for (unsigned k = 0; k <= 1; ++k) {
          ++total;
          RatPoly q = section_poly_fit(two_thirds(), p, {i, j, k}, 24, opts);
          const unsigned s = i + j + k;
          Rat lead = 1;
          for (unsigned t = 0; t < s; ++t) lead *= p * p / 3;
          lead /= Rat(factorial(i) * factorial(j) * factorial(k));
          const bool deg = q.degree() == static_cast<int>(s + 1);
          const bool lc = !q.is_zero() && (deg ? q.leading() == lead : q.coeff(s) == lead);
          degree_ok += deg;
          lead_ok += lc;
          degrees += std::to_string(q.degree());
        }
  out.pass = degree_ok == total && lead_ok == total;
  out.detail = "degree i+j+k+1 in " + std::to_string(degree_ok) + "/" + std::to_string(total) +
               " (observed degrees " + degrees + ", i.e. i+j+k); leading coefficient law in " +
               std::to_string(lead_ok) + "/" + std::to_string(total);
  return out;
}

std::vector<std::size_t> sample_cells(std::size_t cells, std::mt19937_64& rng) {
  std::vector<std::size_t> out;
  std::bernoulli_distribution keep(0.01);
  for (std::size_t i = 0; i < cells; ++i)
    if (keep(rng)) out.push_back(i);
  if (out.empty()) out.push_back(cells - 1);
  return out;
}

Outcome oracle_suite(unsigned threads) {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> coef(-3, 3), deg(0, 2), terms(1, 4), arity_d(1, 3);
  std::uniform_int_distribution<unsigned> bound(0, 4);
  std::size_t agree = 0;
  const std::size_t total = 200;
  for (std::size_t trial = 0; trial < total; ++trial) {
    const auto arity = static_cast<std::size_t>(arity_d(rng));
    std::vector<std::string> vars;
    for (std::size_t i = 0; i < arity; ++i) vars.push_back(std::string(1, static_cast<char>('a' + i)));
    auto random_poly = [&](bool unit_constant) {
      MPoly m(arity);
      const int n = terms(rng);
      for (int t = 0; t < n; ++t) {
        Exponent e(arity);
        for (auto& x : e) x = static_cast<unsigned>(deg(rng));
        if (int c = coef(rng)) m.add_term(e, ParamPoly::constant(Rat(c)));
      }
      if (unit_constant) {
        const Exponent zero(arity, 0);
        m.add_term(zero, ParamPoly::constant(Rat(1)) - m.coeff(zero));
      }
      return m;
    };
    RatFun f{random_poly(false), random_poly(true), vars, ParamMode::symbolic()};
    DegreeBox box;
    for (std::size_t i = 0; i < arity; ++i) box.upper.push_back(bound(rng));
    auto oracle = brute_expand(f, box);
    auto fast = expand_exact(f, box);
    bool same = true;
    for (std::size_t i = 0; i < oracle.size(); ++i) same = same && oracle.at(i) == ParamPoly::constant(fast.at(i));
    agree += same;
  }

  ExpandOptions opts;
  opts.threads = threads;
  std::size_t boxes_ok = 0, sampled = 0;
  auto check_exact = [&](const RatFun& g, const DegreeBox& box) {
    auto b = expand_exact(g, box, opts);
    auto cells = sample_cells(b.size(), rng);
    sampled += cells.size();
    boxes_ok += reconvolution_holds(g, b, cells);
  };
  auto check_symbolic = [&](const RatFun& f, const DegreeBox& box) {
    RatFun g = tp_transform(f, SymbolicParam{});
    auto b = expand_symbolic(g, box, opts);
    auto cells = sample_cells(b.size(), rng);
    sampled += cells.size();
    boxes_ok += reconvolution_holds(g, b, cells);
  };
  check_symbolic(cubic(), DegreeBox::cube(3, 10));
  check_symbolic(two_thirds(), DegreeBox::cube(4, 6));
  check_exact(tp_transform(cubic(), kConvergent1), DegreeBox::cube(3, 60));
  check_exact(tp_transform(two_thirds(), kConvergent2), DegreeBox::cube(4, 25));

  return {agree == total && boxes_ok == 4,
          std::to_string(agree) + "/" + std::to_string(total) + " random functions agree with the oracle; " +
              "reconvolution holds on " + std::to_string(boxes_ok) + "/4 boxes (" + std::to_string(sampled) +
              " sampled cells)"};
}

}  // namespace

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "T_(1/2) identity", 1, identity_half},
      {2, "T_sqrt3 identity (algebraic mode)", 1, identity_root3},
      {3, "coefficient polynomials", 3, coefficient_polys},
      {4, "threshold roots", 1, threshold_roots},
      {5, "convergents", 5, convergent_lists},
      {6, "pmax on 10^3 and 6^4", 1200, pmax_boxes},
      {7, "fixed-convergent scans on 60^3 and 25^4", 1800, fixed_scans},
      {8, "64/27 bound profile", 900, sixty_four_profile},
      {9, "oscillation at p = 2", 600, threshold_oscillation},
      {10, "section growth table", 1800, section_growth},
      {11, "4-var diagonal quotients at p = 299/100", 900, diagonal_quotients},
      {12, "triple-sum cross-check", 60, triple_sum},
      {13, "section polynomial law", 300, section_polynomials},
      {14, "oracle property suite", 300, oracle_suite},
  };
  return all;
}

Result run(const Criterion& c, unsigned threads) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.run(threads);
  } catch (const std::exception& e) {
    o = {false, std::string("error: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > c.budget) {
    o.pass = false;
    o.detail += "; over the " + fmt(c.budget, 6) + " s budget";
  }
  return {c.id, c.title, o.pass, o.detail, secs, c.budget};
}

std::string format(const Result& r) {
  std::ostringstream s;
  s << (r.pass ? "PASS" : "FAIL") << ' ' << std::setw(2) << r.id << "  " << r.title << "  (" << std::fixed
    << std::setprecision(2) << r.seconds << " s of " << std::setprecision(0) << r.budget << " s)  " << r.detail;
  return s.str();
}

}  // namespace poslab::repro
