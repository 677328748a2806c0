#include "poslab/series.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <numeric>
#include <sstream>

#include "poslab/error.hpp"
#include "poslab/parallel.hpp"

namespace poslab {

// ---------------------------------------------------------------- boxes

std::size_t DegreeBox::cells() const {
  std::size_t n = 1;
  for (unsigned b : upper) {
    const std::size_t f = static_cast<std::size_t>(b) + 1;
    if (n > std::numeric_limits<std::size_t>::max() / f) return std::numeric_limits<std::size_t>::max();
    n *= f;
  }
  return n;
}

unsigned DegreeBox::max_total_degree() const { return std::accumulate(upper.begin(), upper.end(), 0u); }

bool DegreeBox::contains(const Exponent& e) const {
  if (e.size() != upper.size()) return false;
  for (std::size_t i = 0; i < e.size(); ++i)
    if (e[i] > upper[i]) return false;
  return true;
}

std::string DegreeBox::to_string() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < upper.size(); ++i) os << (i ? "," : "") << upper[i];
  return os.str();
}

DegreeBox DegreeBox::parse(std::string_view text, std::size_t arity) {
  DegreeBox box;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    std::string item(text.substr(start, comma - start));
    try {
      std::size_t used = 0;
      long v = std::stol(item, &used);
      if (used != item.size() || v < 0) throw std::invalid_argument(item);
      box.upper.push_back(static_cast<unsigned>(v));
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "bad degree bound '" + item + "'");
    }
    start = comma + 1;
  }
  if (arity > 0 && box.upper.size() == 1 && arity > 1) box.upper.assign(arity, box.upper[0]);
  if (arity > 0 && box.upper.size() != arity)
    throw Error(ErrorKind::InvalidArgument, "box has " + std::to_string(box.upper.size()) + " bounds, expected " +
                                                std::to_string(arity));
  return box;
}

const char* to_string(ExpandMode m) {
  switch (m) {
    case ExpandMode::Symbolic: return "symbolic";
    case ExpandMode::ExactRational: return "exact";
    case ExpandMode::Interval: return "interval";
  }
  return "";
}

BoxLayout::BoxLayout(DegreeBox box) : box_(std::move(box)), strides_(box_.arity()) {
  cells_ = box_.cells();
  std::size_t s = 1;
  for (std::size_t i = box_.arity(); i-- > 0;) {
    strides_[i] = s;
    s *= static_cast<std::size_t>(box_.upper[i]) + 1;
  }
}

std::size_t BoxLayout::index(const Exponent& e) const {
  if (!box_.contains(e)) throw Error(ErrorKind::InvalidArgument, "exponent outside the degree box");
  std::size_t flat = 0;
  for (std::size_t i = 0; i < e.size(); ++i) flat += e[i] * strides_[i];
  return flat;
}

Exponent BoxLayout::exponent(std::size_t flat) const {
  Exponent e(box_.arity());
  for (std::size_t i = 0; i < e.size(); ++i) {
    e[i] = static_cast<unsigned>(flat / strides_[i]);
    flat %= strides_[i];
  }
  return e;
}

std::vector<std::vector<std::size_t>> BoxLayout::levels() const {
  std::vector<std::vector<std::size_t>> out(box_.max_total_degree() + 1);
  Exponent e(box_.arity(), 0);
  unsigned total = 0;
  for (std::size_t flat = 0; flat < cells_; ++flat) {
    out[total].push_back(flat);
    // Row-major increment of e, tracking the total degree.
    for (std::size_t i = e.size(); i-- > 0;) {
      if (e[i] < box_.upper[i]) {
        ++e[i];
        ++total;
        break;
      }
      total -= e[i];
      e[i] = 0;
    }
  }
  return out;
}

// ---------------------------------------------------------------- scaling

namespace {

unsigned total(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0u); }

BigInt ipow(const BigInt& b, unsigned e) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

template <class Coef>
void fill_den_degree(ScaledSystem<Coef>& s, std::size_t arity) {
  s.den_degree.assign(arity, 0);
  for (const auto& t : s.den)
    for (std::size_t i = 0; i < arity; ++i) s.den_degree[i] = std::max(s.den_degree[i], t.exponent[i]);
}

// Pairwise coprime integers whose products of powers give every input.
std::vector<BigInt> coprime_base(std::vector<BigInt> xs) {
  std::erase_if(xs, [](const BigInt& x) { return x == 1; });
  bool changed = true;
  while (changed) {
    changed = false;
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    for (std::size_t i = 0; i < xs.size() && !changed; ++i)
      for (std::size_t j = i + 1; j < xs.size() && !changed; ++j) {
        BigInt g;
        mpz_gcd(g.get_mpz_t(), xs[i].get_mpz_t(), xs[j].get_mpz_t());
        if (g == 1) continue;
        BigInt a = xs[i] / g, b = xs[j] / g;
        xs.erase(xs.begin() + j);
        xs.erase(xs.begin() + i);
        for (BigInt* v : {&a, &b, &g})
          if (*v != 1) xs.push_back(*v);
        changed = true;
      }
  }
  return xs;
}

// Smallest M (over the coprime base) with den | M^weight for every pair.
BigInt smallest_multiplier(const std::vector<std::pair<BigInt, unsigned>>& dens) {
  std::vector<BigInt> values;
  for (const auto& d : dens) values.push_back(d.first);
  const std::vector<BigInt> base = coprime_base(values);
  BigInt m = 1;
  for (const BigInt& b : base) {
    unsigned need = 0;
    for (const auto& [d, weight] : dens) {
      BigInt rest = d;
      unsigned v = 0;
      while (mpz_divisible_p(rest.get_mpz_t(), b.get_mpz_t())) {
        rest /= b;
        ++v;
      }
      need = std::max(need, (v + weight - 1) / weight);
    }
    m *= ipow(b, need);
  }
  for (const auto& [d, weight] : dens)
    if (!mpz_divisible_p(ipow(m, weight).get_mpz_t(), d.get_mpz_t()))
      throw std::logic_error("coprime base does not cover a denominator");
  return m;
}

void check_budget(std::size_t cells, std::size_t budget, const char* what) {
  if (cells > budget)
    throw Error(ErrorKind::BudgetExceeded, std::string(what) + " expansion needs " + std::to_string(cells) +
                                               " cells, budget is " + std::to_string(budget));
}

}  // namespace

ScaledSystem<BigInt> scaled_system_exact(const RatFun& f) {
  if (!f.param_free() || f.mode.kind == ParamMode::Kind::Algebraic)
    throw Error(ErrorKind::IncompatibleModes, "exact expansion needs a function with rational coefficients");
  const Rat d0 = f.den.constant_term().coeff(0);
  if (d0 == 0) throw Error(ErrorKind::NonExpandable, "denominator has zero constant term");
  ScaledSystem<BigInt> s;
  const Exponent zero(f.arity(), 0);
  std::vector<std::pair<BigInt, unsigned>> dens;
  for (const auto& [e, c] : f.den.terms())
    if (e != zero) dens.emplace_back(Rat(c.coeff(0) / d0).get_den(), total(e));
  for (const auto& [e, c] : f.num.terms()) {
    Rat r = c.coeff(0) / d0;
    if (e == zero)
      s.scale = r.get_den();
    else
      dens.emplace_back(r.get_den(), total(e));
  }
  s.multiplier = smallest_multiplier(dens);
  for (const auto& [e, c] : f.den.terms()) {
    if (e == zero) continue;
    Rat r = c.coeff(0) / d0 * Rat(ipow(s.multiplier, total(e)));
    s.den.push_back({e, r.get_num()});
  }
  for (const auto& [e, c] : f.num.terms()) {
    Rat r = c.coeff(0) / d0 * Rat(s.scale * ipow(s.multiplier, total(e)));
    s.num.push_back({e, r.get_num()});
  }
  fill_den_degree(s, f.arity());
  return s;
}

ScaledSystem<ZPoly> scaled_system_symbolic(const RatFun& f) {
  const ParamPoly d0p = f.den.constant_term();
  if (d0p.is_zero()) throw Error(ErrorKind::NonExpandable, "denominator has zero constant term");
  if (!d0p.is_constant())
    throw Error(ErrorKind::NonExpandable, "constant term of the denominator depends on p");
  const Rat d0 = d0p.coeff(0);
  ScaledSystem<ZPoly> s;
  const Exponent zero(f.arity(), 0);
  auto lcm_dens = [](const ParamPoly& c) {
    BigInt acc = 1;
    for (const auto& r : c.coeffs()) mpz_lcm(acc.get_mpz_t(), acc.get_mpz_t(), r.get_den_mpz_t());
    return acc;
  };
  std::vector<std::pair<BigInt, unsigned>> dens;
  for (const auto& [e, c] : f.den.terms())
    if (e != zero) dens.emplace_back(lcm_dens(c * (1 / d0)), total(e));
  for (const auto& [e, c] : f.num.terms()) {
    if (e == zero)
      s.scale = lcm_dens(c * (1 / d0));
    else
      dens.emplace_back(lcm_dens(c * (1 / d0)), total(e));
  }
  s.multiplier = smallest_multiplier(dens);
  auto to_z = [](const ParamPoly& c) {
    ZPoly z;
    for (const auto& r : c.coeffs()) z.push_back(r.get_num());
    return z;
  };
  for (const auto& [e, c] : f.den.terms())
    if (e != zero) s.den.push_back({e, to_z(c * (Rat(ipow(s.multiplier, total(e))) / d0))});
  for (const auto& [e, c] : f.num.terms())
    s.num.push_back({e, to_z(c * (Rat(s.scale * ipow(s.multiplier, total(e))) / d0))});
  fill_den_degree(s, f.arity());
  return s;
}

Rat ScaledBox::value(std::size_t flat) const {
  Exponent e = layout.exponent(flat);
  Rat r(values[flat], scale * ipow(multiplier, total(e)));
  r.canonicalize();
  return r;
}

// ---------------------------------------------------------------- engine

namespace {

template <class Coef>
struct DenOffset {
  Exponent exponent;
  std::size_t offset;
  const Coef* coef;
};

inline void submul(BigInt& acc, const BigInt& c, const BigInt& v) {
  mpz_submul(acc.get_mpz_t(), c.get_mpz_t(), v.get_mpz_t());
}

inline void submul(ZPoly& acc, const ZPoly& c, const ZPoly& v) {
  if (c.empty() || v.empty()) return;
  const std::size_t need = c.size() + v.size() - 1;
  if (acc.size() < need) acc.resize(need);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] == 0) continue;
    for (std::size_t j = 0; j < v.size(); ++j)
      mpz_submul(acc[i + j].get_mpz_t(), c[i].get_mpz_t(), v[j].get_mpz_t());
  }
}

struct IntervalWork {
  IntervalScalar scratch[2];
  explicit IntervalWork(mpfr_prec_t prec) : scratch{IntervalScalar(prec), IntervalScalar(prec)} {}
};

// Evaluates the graded recurrence in place: on entry cells hold the numerator
// contributions, on exit the coefficients.
template <class Value, class Coef, class Update>
void run_levels(const BoxLayout& layout, const std::vector<DenOffset<Coef>>& den, std::vector<Value>& cells,
                unsigned threads, Update&& make_updater) {
  const auto levels = layout.levels();
  for (std::size_t g = 1; g < levels.size(); ++g) {
    const auto& level = levels[g];
    parallel_for(level.size(), threads, [&](std::size_t begin, std::size_t end) {
      auto update = make_updater();
      for (std::size_t k = begin; k < end; ++k) {
        const std::size_t flat = level[k];
        const Exponent e = layout.exponent(flat);
        Value& acc = cells[flat];
        for (const auto& d : den) {
          bool fits = true;
          for (std::size_t i = 0; i < e.size(); ++i)
            if (d.exponent[i] > e[i]) {
              fits = false;
              break;
            }
          if (fits) update(acc, *d.coef, cells[flat - d.offset]);
        }
      }
    });
  }
}

template <class Coef>
std::vector<DenOffset<Coef>> offsets(const BoxLayout& layout, const std::vector<typename ScaledSystem<Coef>::Term>& den) {
  std::vector<DenOffset<Coef>> out;
  for (const auto& t : den) {
    if (!layout.box().contains(t.exponent)) continue;  // never fits a cell
    out.push_back({t.exponent, layout.index(t.exponent), &t.coef});
  }
  return out;
}

}  // namespace

ScaledBox expand_scaled(const RatFun& f, const DegreeBox& box, const ExpandOptions& opts) {
  if (box.arity() != f.arity()) throw Error(ErrorKind::InvalidArgument, "box arity does not match the function");
  check_budget(box.cells(), opts.max_cells, "exact");
  const ScaledSystem<BigInt> sys = scaled_system_exact(f);
  BoxLayout layout(box);
  std::vector<BigInt> cells(layout.cells());
  for (const auto& t : sys.num)
    if (box.contains(t.exponent)) cells[layout.index(t.exponent)] = t.coef;
  run_levels(layout, offsets<BigInt>(layout, sys.den), cells, opts.threads,
             [] { return [](BigInt& acc, const BigInt& c, const BigInt& v) { submul(acc, c, v); }; });
  return ScaledBox{std::move(layout), std::move(cells), sys.scale, sys.multiplier};
}

CoeffBox<Rat> expand_exact(const RatFun& f, const DegreeBox& box, const ExpandOptions& opts) {
  ScaledBox sb = expand_scaled(f, box, opts);
  std::vector<Rat> entries(sb.values.size());
  const auto levels = sb.layout.levels();
  for (std::size_t g = 0; g < levels.size(); ++g) {
    const BigInt den = sb.scale * ipow(sb.multiplier, static_cast<unsigned>(g));
    parallel_for(levels[g].size(), opts.threads, [&](std::size_t b, std::size_t e) {
      for (std::size_t k = b; k < e; ++k) {
        const std::size_t flat = levels[g][k];
        Rat& r = entries[flat];
        mpz_swap(r.get_num_mpz_t(), sb.values[flat].get_mpz_t());
        r.get_den() = den;
        r.canonicalize();
      }
    });
  }
  return CoeffBox<Rat>(box, f.vars, std::move(entries));
}

CoeffBox<ParamPoly> expand_symbolic(const RatFun& f, const DegreeBox& box, const ExpandOptions& opts) {
  if (box.arity() != f.arity()) throw Error(ErrorKind::InvalidArgument, "box arity does not match the function");
  check_budget(box.cells(), opts.max_symbolic_cells, "symbolic");
  const ScaledSystem<ZPoly> sys = scaled_system_symbolic(f);
  BoxLayout layout(box);
  std::vector<ZPoly> cells(layout.cells());
  for (const auto& t : sys.num)
    if (box.contains(t.exponent)) cells[layout.index(t.exponent)] = t.coef;
  run_levels(layout, offsets<ZPoly>(layout, sys.den), cells, opts.threads,
             [] { return [](ZPoly& acc, const ZPoly& c, const ZPoly& v) { submul(acc, c, v); }; });
  std::vector<ParamPoly> entries(cells.size());
  const bool algebraic = f.mode.kind == ParamMode::Kind::Algebraic;
  parallel_for(cells.size(), opts.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t flat = b; flat < e; ++flat) {
      const unsigned g = total(layout.exponent(flat));
      ParamPoly p = to_rat_poly(cells[flat]);
      p *= Rat(BigInt(1), sys.scale * ipow(sys.multiplier, g));
      entries[flat] = algebraic ? reduce_mod(p, f.mode.minpoly) : std::move(p);
    }
  });
  return CoeffBox<ParamPoly>(box, f.vars, std::move(entries));
}

CoeffBox<IntervalScalar> expand_interval(const RatFun& f, const DegreeBox& box, const ExpandOptions& opts) {
  if (box.arity() != f.arity()) throw Error(ErrorKind::InvalidArgument, "box arity does not match the function");
  check_budget(box.cells(), opts.max_cells, "interval");
  if (!f.param_free() || f.mode.kind == ParamMode::Kind::Algebraic)
    throw Error(ErrorKind::IncompatibleModes, "interval expansion needs a function with rational coefficients");
  const Rat d0 = f.den.constant_term().coeff(0);
  if (d0 == 0) throw Error(ErrorKind::NonExpandable, "denominator has zero constant term");
  const Exponent zero(f.arity(), 0);
  ScaledSystem<IntervalScalar> sys;  // unscaled: coefficients divided by d0 only
  for (const auto& [e, c] : f.den.terms())
    if (e != zero) sys.den.push_back({e, IntervalScalar(Rat(c.coeff(0) / d0), opts.precision)});
  BoxLayout layout(box);
  std::vector<IntervalScalar> cells;
  cells.reserve(layout.cells());
  for (std::size_t i = 0; i < layout.cells(); ++i) cells.emplace_back(opts.precision);
  for (const auto& [e, c] : f.num.terms())
    if (box.contains(e)) cells[layout.index(e)] = IntervalScalar(Rat(c.coeff(0) / d0), opts.precision);
  run_levels(layout, offsets<IntervalScalar>(layout, sys.den), cells, opts.threads, [&] {
    return [work = std::make_shared<IntervalWork>(opts.precision)](IntervalScalar& acc, const IntervalScalar& c,
                                                                   const IntervalScalar& v) {
      submul(acc, c, v, work->scratch);
    };
  });
  return CoeffBox<IntervalScalar>(box, f.vars, std::move(cells));
}

// ---------------------------------------------------------------- oracle

CoeffBox<ParamPoly> brute_expand(const RatFun& f, const DegreeBox& box) {
  if (box.arity() != f.arity()) throw Error(ErrorKind::InvalidArgument, "box arity does not match the function");
  check_budget(box.cells(), 10'000, "brute-force");
  const ParamPoly d0p = f.den.constant_term();
  if (d0p.is_zero() || !d0p.is_constant()) throw Error(ErrorKind::NonExpandable, "denominator constant term");
  const ParamPoly inv = ParamPoly::constant(1 / d0p.coeff(0));
  const std::size_t n = f.arity();
  auto truncate = [&](const MPoly& m) {
    MPoly out(n);
    for (const auto& [e, c] : m.terms())
      if (box.contains(e)) out.add_term(e, c);
    return out;
  };
  const MPoly one = MPoly::constant(n, ParamPoly::constant(1));
  const MPoly e_poly = truncate(one - f.den * inv);
  MPoly term = truncate(f.num * inv);
  MPoly sum = term;
  for (unsigned k = 1; k <= box.max_total_degree(); ++k) {
    term = truncate(term * e_poly);
    if (term.is_zero()) break;
    sum += term;
  }
  BoxLayout layout(box);
  std::vector<ParamPoly> entries(layout.cells());
  for (const auto& [e, c] : sum.terms()) entries[layout.index(e)] = c;
  if (f.mode.kind == ParamMode::Kind::Algebraic)
    for (auto& c : entries) c = reduce_mod(c, f.mode.minpoly);
  return CoeffBox<ParamPoly>(box, f.vars, std::move(entries));
}

namespace {

template <class Scalar, class Convert>
bool reconvolution_impl(const RatFun& f, const CoeffBox<Scalar>& box, const std::vector<std::size_t>& cells,
                        Convert&& convert) {
  for (std::size_t flat : cells) {
    const Exponent a = box.layout().exponent(flat);
    Scalar acc{};
    for (const auto& [b, c] : f.den.terms()) {
      bool fits = true;
      Exponent diff(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (b[i] > a[i]) {
          fits = false;
          break;
        }
        diff[i] = a[i] - b[i];
      }
      if (fits) acc += convert(c) * box(diff);
    }
    Scalar want = convert(f.num.coeff(a));
    if (!(acc == want)) return false;
  }
  return true;
}

}  // namespace

bool reconvolution_holds(const RatFun& f, const CoeffBox<Rat>& box, const std::vector<std::size_t>& cells) {
  return reconvolution_impl(f, box, cells, [](const ParamPoly& c) { return c.coeff(0); });
}

bool reconvolution_holds(const RatFun& f, const CoeffBox<ParamPoly>& box, const std::vector<std::size_t>& cells) {
  if (f.mode.kind == ParamMode::Kind::Algebraic) {
    for (std::size_t flat : cells) {
      const Exponent a = box.layout().exponent(flat);
      ParamPoly acc;
      for (const auto& [b, c] : f.den.terms()) {
        bool fits = true;
        Exponent diff(a.size());
        for (std::size_t i = 0; i < a.size() && fits; ++i) {
          fits = b[i] <= a[i];
          if (fits) diff[i] = a[i] - b[i];
        }
        if (fits) acc += c * box(diff);
      }
      if (!(reduce_mod(acc - f.num.coeff(a), f.mode.minpoly).is_zero())) return false;
    }
    return true;
  }
  return reconvolution_impl(f, box, cells, [](const ParamPoly& c) { return c; });
}

}  // namespace poslab
