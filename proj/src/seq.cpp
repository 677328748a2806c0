#include "poslab/seq.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <sstream>

#include "poslab/error.hpp"
#include "poslab/parallel.hpp"
#include "poslab/roots.hpp"

namespace poslab {

Real to_real(const Rat& r) {
  Real x;
  mpfr_set_q(x.backend().data(), r.get_mpq_t(), MPFR_RNDN);
  return x;
}

// ---------------------------------------------------------------- paths

Exponent PathSpec::at(std::size_t n) const {
  Exponent e(direction.size());
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = static_cast<unsigned>(n * direction[i] + offset[i]);
  return e;
}

std::string PathSpec::to_string() const {
  std::ostringstream os;
  os << "n*(";
  for (std::size_t i = 0; i < direction.size(); ++i) os << (i ? "," : "") << direction[i];
  os << ")+(";
  for (std::size_t i = 0; i < offset.size(); ++i) os << (i ? "," : "") << offset[i];
  os << ")";
  return os.str();
}

PathSpec PathSpec::parse(std::string_view direction, std::string_view offset, std::size_t arity) {
  PathSpec path;
  path.direction = DegreeBox::parse(direction, 0).upper;
  path.offset = offset.empty() ? Exponent(path.direction.size(), 0) : DegreeBox::parse(offset, 0).upper;
  if (path.direction.size() != arity || path.offset.size() != arity)
    throw Error(ErrorKind::InvalidArgument, "path arity does not match the variables");
  if (std::all_of(path.direction.begin(), path.direction.end(), [](unsigned d) { return d == 0; }))
    throw Error(ErrorKind::InvalidArgument, "path direction must be nonzero");
  return path;
}

// ---------------------------------------------------------------- extraction

namespace {

unsigned total(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0u); }

struct SlabTerm {
  unsigned back;        // exponent along the streamed axis
  Exponent rest;        // exponent in the remaining variables
  std::size_t offset;   // flat offset of `rest` inside a slab
  const BigInt* coef;
};

}  // namespace

Sequence extract_path(const RatFun& g, const PathSpec& path, std::size_t N, const ExpandOptions& opts) {
  const std::size_t arity = g.arity();
  if (path.direction.size() != arity || path.offset.size() != arity)
    throw Error(ErrorKind::InvalidArgument, "path arity does not match the function");
  if (std::all_of(path.direction.begin(), path.direction.end(), [](unsigned d) { return d == 0; }))
    throw Error(ErrorKind::InvalidArgument, "path direction must be nonzero");
  const ScaledSystem<BigInt> sys = scaled_system_exact(g);

  std::vector<unsigned> upper(arity);
  for (std::size_t v = 0; v < arity; ++v) {
    const unsigned long long u = static_cast<unsigned long long>(N) * path.direction[v] + path.offset[v];
    if (u > std::numeric_limits<unsigned>::max()) throw Error(ErrorKind::BudgetExceeded, "path leaves the index range");
    upper[v] = static_cast<unsigned>(u);
  }
  const std::size_t axis = static_cast<std::size_t>(std::max_element(upper.begin(), upper.end()) - upper.begin());
  std::vector<std::size_t> others;
  for (std::size_t v = 0; v < arity; ++v)
    if (v != axis) others.push_back(v);
  auto rest_of = [&](const Exponent& e) {
    Exponent r(others.size());
    for (std::size_t k = 0; k < others.size(); ++k) r[k] = e[others[k]];
    return r;
  };

  DegreeBox slab_box;
  for (std::size_t v : others) slab_box.upper.push_back(upper[v]);
  const BoxLayout slab(slab_box);
  const unsigned depth = sys.den_degree.empty() ? 0 : sys.den_degree[axis];
  const std::size_t window = depth + 1;
  if (slab.cells() > opts.max_cells / window)
    throw Error(ErrorKind::BudgetExceeded, "extraction window of " + std::to_string(window) + " x " +
                                               std::to_string(slab.cells()) + " cells exceeds the budget");
  if (slab.cells() > opts.max_stream_cells / (static_cast<std::size_t>(upper[axis]) + 1))
    throw Error(ErrorKind::BudgetExceeded, "extraction would visit more than " +
                                               std::to_string(opts.max_stream_cells) + " cells");

  std::vector<SlabTerm> den;
  for (const auto& t : sys.den) {
    Exponent r = rest_of(t.exponent);
    if (!slab_box.contains(r) || t.exponent[axis] > upper[axis]) continue;
    den.push_back({t.exponent[axis], r, slab.index(r), &t.coef});
  }
  std::vector<std::vector<std::size_t>> wants(static_cast<std::size_t>(upper[axis]) + 1);
  for (std::size_t n = 0; n <= N; ++n) wants[n * path.direction[axis] + path.offset[axis]].push_back(n);

  std::vector<BigInt> powers{1};
  auto mpow = [&](unsigned k) -> const BigInt& {
    while (powers.size() <= k) powers.push_back(powers.back() * sys.multiplier);
    return powers[k];
  };

  const auto levels = slab.levels();
  std::vector<std::vector<BigInt>> ring(window, std::vector<BigInt>(slab.cells()));
  Sequence out(N + 1);
  for (unsigned i = 0; i <= upper[axis]; ++i) {
    std::vector<BigInt>& cur = ring[i % window];
    for (auto& c : cur) c = 0;
    for (const auto& t : sys.num) {
      if (t.exponent[axis] != i) continue;
      Exponent r = rest_of(t.exponent);
      if (slab_box.contains(r)) cur[slab.index(r)] = t.coef;
    }
    for (const auto& level : levels) {
      parallel_for(level.size(), opts.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
          const std::size_t flat = level[k];
          const Exponent r = slab.exponent(flat);
          BigInt& acc = cur[flat];
          for (const auto& d : den) {
            if (d.back > i) continue;
            bool fits = true;
            for (std::size_t v = 0; v < r.size(); ++v)
              if (d.rest[v] > r[v]) {
                fits = false;
                break;
              }
            if (!fits) continue;
            const std::vector<BigInt>& src = d.back == 0 ? cur : ring[(i - d.back) % window];
            mpz_submul(acc.get_mpz_t(), d.coef->get_mpz_t(), src[flat - d.offset].get_mpz_t());
          }
        }
      });
    }
    for (std::size_t n : wants[i]) {
      const Exponent e = path.at(n);
      Rat value(cur[slab.index(rest_of(e))], sys.scale * mpow(total(e)));
      value.canonicalize();
      out[n] = std::move(value);
    }
  }
  return out;
}

Sequence extract(const RatFun& f, const Rat& p, const PathSpec& path, std::size_t N, const ExpandOptions& opts) {
  return extract_path(tp_transform(f, p), path, N, opts);
}

// ---------------------------------------------------------------- recurrences

unsigned Recurrence::degree() const {
  int d = 0;
  for (const auto& c : coeffs) d = std::max(d, c.degree());
  return static_cast<unsigned>(d);
}

Rat Recurrence::residual(const Sequence& seq, std::size_t n) const {
  Rat sum = 0;
  const Rat x(static_cast<unsigned long>(n));
  for (std::size_t i = 0; i < coeffs.size(); ++i) sum += coeffs[i](x) * seq.at(n + i);
  return sum;
}

bool Recurrence::annihilates(const Sequence& seq) const {
  for (std::size_t n = 0; n + order() < seq.size(); ++n)
    if (residual(seq, n) != 0) return false;
  return true;
}

std::string Recurrence::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    if (coeffs[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << coeffs[i].to_string("n") << ")*a(n" << (i ? "+" + std::to_string(i) : "") << ")";
  }
  os << " = 0";
  return os.str();
}

namespace {

constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % kPrime);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  for (; e; e >>= 1, a = mulmod(a, a))
    if (e & 1) r = mulmod(r, a);
  return r;
}

using IntMatrix = std::vector<std::vector<BigInt>>;

std::size_t rank_mod_prime(const IntMatrix& m, std::size_t cols) {
  std::vector<std::vector<std::uint64_t>> a(m.size(), std::vector<std::uint64_t>(cols));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) a[i][j] = mpz_fdiv_ui(m[i][j].get_mpz_t(), kPrime);
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < a.size(); ++c) {
    std::size_t piv = rank;
    while (piv < a.size() && a[piv][c] == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[rank]);
    const std::uint64_t inv = powmod(a[rank][c], kPrime - 2);
    for (std::size_t i = rank + 1; i < a.size(); ++i) {
      if (a[i][c] == 0) continue;
      const std::uint64_t f = mulmod(a[i][c], inv);
      for (std::size_t j = c; j < cols; ++j) a[i][j] = (a[i][j] + kPrime - mulmod(f, a[rank][j])) % kPrime;
    }
    ++rank;
  }
  return rank;
}

// Fraction-free (Bareiss) row echelon form; returns the pivot columns. Then a
// nullspace vector with the first free column set to one.
std::optional<std::vector<Rat>> nullspace_vector(IntMatrix a, std::size_t cols) {
  std::vector<std::size_t> pivots;
  BigInt prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
    std::size_t piv = r;
    while (piv < a.size() && a[piv][c] == 0) ++piv;
    if (piv == a.size()) continue;
    std::swap(a[piv], a[r]);
    for (std::size_t i = r + 1; i < a.size(); ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        BigInt t = a[r][c] * a[i][j] - a[i][c] * a[r][j];
        mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    pivots.push_back(c);
    ++r;
  }
  if (pivots.size() == cols) return std::nullopt;
  std::size_t free_col = 0;
  for (std::size_t k = 0; k < pivots.size() && pivots[k] == free_col; ++k) ++free_col;
  std::vector<Rat> x(cols, Rat(0));
  x[free_col] = 1;
  std::vector<bool> is_pivot(cols, false);
  for (std::size_t c : pivots) is_pivot[c] = true;
  for (std::size_t k = pivots.size(); k-- > 0;) {
    const std::size_t pc = pivots[k];
    Rat s = 0;
    for (std::size_t j = pc + 1; j < cols; ++j)
      if (x[j] != 0) s += Rat(a[k][j]) * x[j];
    x[pc] = -s / Rat(a[k][pc]);
  }
  return x;
}

std::optional<Recurrence> try_ansatz(const Sequence& seq, unsigned r, unsigned d, std::size_t guard) {
  const std::size_t cols = static_cast<std::size_t>(r + 1) * (d + 1);
  const std::size_t equations = seq.size() - r;
  const std::size_t max_rows = equations - guard;
  std::size_t rows = std::min(max_rows, cols + 8);
  while (true) {
    IntMatrix m(rows, std::vector<BigInt>(cols));
    for (std::size_t n = 0; n < rows; ++n) {
      BigInt l = 1;
      for (unsigned i = 0; i <= r; ++i) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), seq[n + i].get_den_mpz_t());
      for (unsigned i = 0; i <= r; ++i) {
        BigInt v = seq[n + i].get_num() * (l / seq[n + i].get_den());
        for (unsigned j = 0; j <= d; ++j) {
          m[n][i * (d + 1) + j] = v;
          v *= static_cast<unsigned long>(n);
        }
      }
    }
    if (rank_mod_prime(m, cols) == cols) return std::nullopt;
    auto x = nullspace_vector(std::move(m), cols);
    if (!x) return std::nullopt;

    BigInt l = 1;
    for (const auto& v : *x) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), v.get_den_mpz_t());
    BigInt g = 0;
    for (const auto& v : *x) {
      BigInt num = v.get_num() * (l / v.get_den());
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), num.get_mpz_t());
    }
    Recurrence rec;
    for (unsigned i = 0; i <= r; ++i) {
      std::vector<Rat> c(d + 1);
      for (unsigned j = 0; j <= d; ++j) c[j] = Rat((*x)[i * (d + 1) + j] * Rat(l) / Rat(g));
      rec.coeffs.emplace_back(std::move(c));
    }
    if (!rec.coeffs.back().is_zero() && rec.coeffs.back().leading() < 0)
      for (auto& c : rec.coeffs) c = -c;
    const bool proper = !rec.coeffs.front().is_zero() && !rec.coeffs.back().is_zero();
    if (proper && rec.annihilates(seq)) {
      rec.verified_horizon = equations - rows;
      return rec;
    }
    if (rows == max_rows) return std::nullopt;
    rows = std::min(max_rows, rows * 2);
  }
}

}  // namespace

std::optional<Recurrence> guess_recurrence(const Sequence& seq, const GuessOptions& opts) {
  const std::size_t need = static_cast<std::size_t>(opts.max_order + 1) * (opts.max_degree + 2) + opts.guard;
  if (seq.size() < need)
    throw Error(ErrorKind::InsufficientData, "guessing up to order " + std::to_string(opts.max_order) +
                                                 " and degree " + std::to_string(opts.max_degree) + " needs " +
                                                 std::to_string(need) + " terms, got " + std::to_string(seq.size()));
  for (unsigned r = 1; r <= opts.max_order; ++r)
    for (unsigned d = 0; d <= opts.max_degree; ++d)
      if (auto rec = try_ansatz(seq, r, d, opts.guard)) return rec;
  return std::nullopt;
}

Sequence extend_by_recurrence(const Recurrence& rec, Sequence seq, std::size_t N) {
  const unsigned r = rec.order();
  if (seq.size() < r) throw Error(ErrorKind::InsufficientData, "need at least `order` initial terms");
  seq.reserve(N + 1);
  while (seq.size() <= N) {
    const std::size_t n = seq.size() - r;
    const Rat x(static_cast<unsigned long>(n));
    const Rat lead = rec.coeffs[r](x);
    if (lead == 0)
      throw Error(ErrorKind::SingularRecurrence, "leading coefficient vanishes at n = " + std::to_string(n));
    Rat s = 0;
    for (unsigned i = 0; i < r; ++i) s += rec.coeffs[i](x) * seq[n + i];
    seq.push_back(-s / lead);
  }
  return seq;
}

// ---------------------------------------------------------------- characteristic roots

namespace {

struct Complex {
  Real re, im;
};

Complex mul(const Complex& a, const Complex& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }

Complex div(const Complex& a, const Complex& b) {
  Real den = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}

// Newton iteration on a square-free polynomial from a double-precision seed.
Complex polish(const std::vector<Real>& c, Complex z) {
  const Real eps = pow(Real(2), -250);
  for (int it = 0; it < 200; ++it) {
    Complex v{c.back(), Real(0)}, dv{Real(0), Real(0)};
    for (std::size_t i = c.size() - 1; i-- > 0;) {
      dv = mul(dv, z);
      dv.re += v.re;
      dv.im += v.im;
      v = mul(v, z);
      v.re += c[i];
    }
    if (dv.re == 0 && dv.im == 0) break;
    Complex step = div(v, dv);
    z.re -= step.re;
    z.im -= step.im;
    if (abs(step.re) + abs(step.im) <= eps * (abs(z.re) + abs(z.im) + 1)) break;
  }
  return z;
}

// Yun's square-free factorisation: q = c * prod s_k^k.
std::vector<std::pair<RatPoly, unsigned>> squarefree_factors(const RatPoly& q) {
  std::vector<std::pair<RatPoly, unsigned>> out;
  RatPoly a = q, b = derivative(q);
  RatPoly g = gcd(a, b);
  RatPoly c = divmod(a, g).first, d = divmod(b, g).first - derivative(c);
  for (unsigned k = 1; c.degree() > 0; ++k) {
    RatPoly s = gcd(c, d);
    if (s.degree() > 0) out.emplace_back(s, k);
    c = divmod(c, s).first;
    d = divmod(d, s).first - derivative(c);
  }
  return out;
}

void roots_of(const RatPoly& s, unsigned mult, std::vector<CharRoot>& out) {
  const int deg = s.degree();
  if (deg < 1) return;
  const ZPoly z = primitive_part(s);
  const Rat tol(BigInt(1), BigInt(1) << 300);
  auto real_roots = isolate_real_roots(z);
  for (auto iv : real_roots) {
    iv = refine(z, iv, tol);
    CharRoot r;
    r.re = to_real(iv.midpoint());
    r.im = 0;
    r.modulus = abs(r.re);
    r.real = true;
    r.multiplicity = mult;
    out.push_back(r);
  }
  const std::size_t nonreal = static_cast<std::size_t>(deg) - real_roots.size();
  if (nonreal == 0) return;

  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
  const Rat lead = s.leading();
  // First row -c_{deg-1}, ..., -c_0 of the monic polynomial; ones below the diagonal.
  for (int i = 0; i < deg; ++i) {
    comp(0, i) = -to_double(s.coeff(static_cast<std::size_t>(deg - 1 - i)) / lead);
    if (i > 0) comp(i, i - 1) = 1;
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(comp, false);
  std::vector<std::complex<double>> seeds(solver.eigenvalues().begin(), solver.eigenvalues().end());
  std::sort(seeds.begin(), seeds.end(),
            [](const auto& a, const auto& b) { return std::abs(a.imag()) > std::abs(b.imag()); });
  std::vector<Real> c;
  for (const auto& v : s.coeffs()) c.push_back(to_real(v));
  for (std::size_t k = 0; k < nonreal && k < seeds.size(); ++k) {
    Complex zc = polish(c, {Real(seeds[k].real()), Real(seeds[k].imag())});
    CharRoot r;
    r.re = zc.re;
    r.im = zc.im;
    r.modulus = sqrt(zc.re * zc.re + zc.im * zc.im);
    r.real = false;
    r.multiplicity = mult;
    out.push_back(r);
  }
}

}  // namespace

std::vector<const CharRoot*> CharAnalysis::dominant() const {
  std::vector<const CharRoot*> out;
  for (const auto& r : roots)
    if (r.dominant) out.push_back(&r);
  return out;
}

CharAnalysis char_analysis(const Recurrence& rec) {
  const unsigned D = rec.degree();
  std::vector<Rat> c;
  for (const auto& ci : rec.coeffs) c.push_back(ci.coeff(D));
  CharAnalysis out;
  out.poly = RatPoly(c);
  if (c.back() == 0)
    throw Error(ErrorKind::DegenerateLeading, "characteristic polynomial loses its leading coefficient");
  for (const auto& [s, k] : squarefree_factors(out.poly)) roots_of(s, k, out.roots);
  std::sort(out.roots.begin(), out.roots.end(), [](const CharRoot& a, const CharRoot& b) {
    if (a.modulus != b.modulus) return a.modulus > b.modulus;
    if (a.re != b.re) return a.re > b.re;
    return a.im > b.im;
  });
  out.dominant_modulus = out.roots.empty() ? Real(0) : out.roots.front().modulus;
  for (auto& r : out.roots) r.dominant = r.modulus >= out.dominant_modulus * (1 - Real(kDominanceGap));
  return out;
}

std::vector<const CharRoot*> CharAnalysis::leading() const {
  std::vector<const CharRoot*> out;
  for (const auto& r : roots)
    if (r.leading) out.push_back(&r);
  return out.empty() ? dominant() : out;
}

namespace {

// Least-squares amplitudes |C_j| in a_k / rho^k ~ sum_j C_j (w_j / rho)^k over
// the window of W terms ending at `end` (inclusive), with k counted from the
// window start.
std::vector<double> window_amplitudes(const Sequence& seq, const std::vector<const CharRoot*>& group,
                                      const Real& rho, std::size_t end, std::size_t W) {
  using Cd = std::complex<double>;
  const std::size_t start = end + 1 - W;
  Eigen::MatrixXcd A(W, group.size());
  Eigen::VectorXcd b(W);
  std::vector<Cd> unit;
  for (const auto* r : group) unit.emplace_back(static_cast<double>(r->re / rho), static_cast<double>(r->im / rho));
  const Real scale = pow(rho, static_cast<long>(start));
  for (std::size_t k = 0; k < W; ++k) {
    b(k) = static_cast<double>(to_real(seq[start + k]) / scale / pow(rho, static_cast<long>(k)));
    for (std::size_t j = 0; j < group.size(); ++j) A(k, j) = std::pow(unit[j], static_cast<double>(k));
  }
  Eigen::VectorXcd c = A.colPivHouseholderQr().solve(b);
  std::vector<double> out;
  for (std::size_t j = 0; j < group.size(); ++j) out.push_back(std::abs(c(j)));
  return out;
}

std::size_t window_for(std::size_t group) { return 4 * group + 4; }

constexpr double kPersistence = 0.25;

std::vector<const CharRoot*> modulus_group(const CharAnalysis& chars, const Real& R) {
  std::vector<const CharRoot*> out;
  for (const auto& r : chars.roots)
    if (abs(r.modulus - R) <= R * Real(kDominanceGap)) out.push_back(&r);
  return out;
}

}  // namespace

const char* to_string(SignBehavior s) {
  switch (s) {
    case SignBehavior::UltimatelyPositive: return "ultimately-positive";
    case SignBehavior::UltimatelyNegative: return "ultimately-negative";
    case SignBehavior::Oscillating: return "oscillating";
    case SignBehavior::Unknown: return "unknown";
  }
  return "";
}

SignBehavior classify_sign(const CharAnalysis& chars, const std::optional<Real>& K) {
  const auto dom = chars.leading();
  if (dom.empty() || chars.dominant_modulus == 0) return SignBehavior::Unknown;
  bool positive_real = false, negative_real = false, complex = false;
  for (const auto* r : dom) {
    if (!r->real)
      complex = true;
    else if (r->re > 0)
      positive_real = true;
    else
      negative_real = true;
  }
  if (positive_real) {
    if (dom.size() != 1 || !K || *K == 0) return SignBehavior::Unknown;
    return *K > 0 ? SignBehavior::UltimatelyPositive : SignBehavior::UltimatelyNegative;
  }
  if (complex && !negative_real) return SignBehavior::Oscillating;
  if (negative_real && !complex && dom.size() == 1) return SignBehavior::Oscillating;
  return SignBehavior::Unknown;
}

// ---------------------------------------------------------------- K and alpha

namespace {

// (n, log|a_n|) for nonzero terms with n >= first.
std::vector<std::pair<std::size_t, Real>> log_terms(const Sequence& seq, std::size_t first) {
  std::vector<std::pair<std::size_t, Real>> out;
  for (std::size_t n = std::max<std::size_t>(first, 1); n < seq.size(); ++n)
    if (seq[n] != 0) out.emplace_back(n, log(abs(to_real(seq[n]))));
  return out;
}

// Slope and intercept of y against x by least squares.
std::pair<double, double> line_fit(const std::vector<double>& x, const std::vector<double>& y) {
  Eigen::MatrixXd A(x.size(), 2);
  Eigen::VectorXd b(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    A(i, 0) = 1;
    A(i, 1) = x[i];
    b(i) = y[i];
  }
  Eigen::Vector2d sol = A.colPivHouseholderQr().solve(b);
  return {sol(1), sol(0)};
}

}  // namespace

Real tail_growth(const Sequence& seq, const Real& alpha) {
  auto logs = log_terms(seq, seq.size() / 2);
  if (logs.size() < 4) throw Error(ErrorKind::InsufficientData, "too few nonzero terms to measure growth");
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < logs.size(); ++k) {
    Real best = logs[k].second - alpha * log(Real(logs[k].first));
    for (std::size_t j = (k >= 3 ? k - 3 : 0); j < k; ++j)
      best = max(best, logs[j].second - alpha * log(Real(logs[j].first)));
    xs.push_back(static_cast<double>(logs[k].first));
    ys.push_back(static_cast<double>(best));
  }
  return exp(Real(line_fit(xs, ys).first));
}

void select_leading(CharAnalysis& chars, const Sequence& seq) {
  for (auto& r : chars.roots) {
    r.leading = false;
    r.amplitude = -1;
  }
  chars.leading_modulus = 0;
  if (chars.roots.empty() || chars.dominant_modulus == 0) return;
  // Largest modulus whose component persists: an absent root's fitted
  // amplitude shrinks geometrically from one window to the next.
  std::vector<Real> moduli;
  for (const auto& r : chars.roots)
    if (r.modulus > 0 && std::none_of(moduli.begin(), moduli.end(), [&](const Real& m) {
          return abs(m - r.modulus) <= m * Real(kDominanceGap);
        }))
      moduli.push_back(r.modulus);
  std::sort(moduli.begin(), moduli.end(), std::greater<>());
  Real R = 0;
  for (const Real& m : moduli) {
    auto group = modulus_group(chars, m);
    const std::size_t W = window_for(group.size());
    if (seq.size() < 2 * W + 1) break;
    auto norm = [&](std::size_t end) {
      double t = 0;
      for (double x : window_amplitudes(seq, group, m, end, W)) t += x;
      return t;
    };
    const double now = norm(seq.size() - 1), before = norm(seq.size() - 1 - W);
    if (now > 0 && now >= kPersistence * before) {
      R = m;
      break;
    }
  }
  if (R == 0) {
    const Real lg = log(tail_growth(seq));
    R = chars.dominant_modulus;
    for (const auto& r : chars.roots)
      if (r.modulus > 0 && abs(log(r.modulus) - lg) < abs(log(R) - lg)) R = r.modulus;
  }
  chars.leading_modulus = R;
  auto group = modulus_group(chars, R);
  const std::size_t W = window_for(group.size());
  if (seq.size() < W + 1) return;
  auto amp = window_amplitudes(seq, group, R, seq.size() - 1, W);
  const double top = *std::max_element(amp.begin(), amp.end());
  for (auto& r : chars.roots) {
    const auto it = std::find(group.begin(), group.end(), &r);
    if (it == group.end()) continue;
    r.amplitude = amp[static_cast<std::size_t>(it - group.begin())];
    r.leading = top > 0 && r.amplitude >= 0.5 * top;
  }
}

KEstimate estimate_K(const Sequence& seq, const Real& rho, const Real& alpha, bool modulus, std::size_t first) {
  if (rho == 0) throw Error(ErrorKind::InvalidArgument, "rho must be nonzero");
  KEstimate out;
  const Real base = modulus ? abs(rho) : rho;
  for (std::size_t n = std::max<std::size_t>(first, 1); n < seq.size(); ++n) {
    Real a = to_real(seq[n]);
    if (modulus) a = abs(a);
    out.trend.emplace_back(n, a / (pow(base, static_cast<long>(n)) * pow(Real(n), alpha)));
  }
  if (out.trend.empty()) throw Error(ErrorKind::InsufficientData, "no terms to form quotients");
  const std::size_t tail = std::max<std::size_t>(1, out.trend.size() / 10);
  Real sum = 0, lo = out.trend.back().second, hi = lo;
  for (std::size_t k = out.trend.size() - tail; k < out.trend.size(); ++k) {
    const Real& q = out.trend[k].second;
    sum += q;
    lo = min(lo, q);
    hi = max(hi, q);
  }
  out.estimate = sum / tail;
  out.spread = hi - lo;

  out.empirical_growth = tail_growth(seq, alpha);
  const Real ratio = out.empirical_growth / abs(rho);
  if (abs(ratio - 1) > Real(0.1))
    throw Error(ErrorKind::GrowthMismatch, "tail growth " + out.empirical_growth.str(8) + " vs |rho| = " +
                                               Real(abs(rho)).str(8));
  return out;
}

std::optional<Rat> snap_rational(double x, unsigned max_den, double tol) {
  std::optional<Rat> best;
  double best_err = tol;
  for (unsigned d = 1; d <= max_den; ++d) {
    const double num = std::round(x * d);
    const double err = std::abs(num / d - x);
    if (err <= best_err + 1e-15 && (!best || err < best_err - 1e-15)) {
      best = frac(static_cast<long>(num), d);
      best_err = err;
    }
  }
  return best;
}

AlphaFit fit_alpha(const Sequence& seq, const Real& rho_modulus) {
  auto logs = log_terms(seq, seq.size() / 2);
  if (logs.size() < 4) throw Error(ErrorKind::InsufficientData, "too few nonzero terms to fit alpha");
  const Real lr = log(abs(rho_modulus));
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < logs.size(); ++k) {
    // Running maximum over a short window, as in estimate_K.
    Real y = logs[k].second - Real(static_cast<long>(logs[k].first)) * lr;
    for (std::size_t j = (k >= 3 ? k - 3 : 0); j < k; ++j)
      y = max(y, logs[j].second - Real(static_cast<long>(logs[j].first)) * lr);
    xs.push_back(std::log(static_cast<double>(logs[k].first)));
    ys.push_back(static_cast<double>(y));
  }
  AlphaFit out;
  out.raw = line_fit(xs, ys).first;
  if (auto s = snap_rational(out.raw)) {
    out.snapped = *s;
    out.is_snapped = true;
  }
  return out;
}

AlphaFit fit_alpha(const Sequence& seq, const CharAnalysis& chars) {
  const Real R = chars.leading_modulus != 0 ? chars.leading_modulus : chars.dominant_modulus;
  if (R == 0) throw Error(ErrorKind::InvalidArgument, "no dominant root");
  const auto group = modulus_group(chars, R);
  const auto lead = chars.leading();
  const std::size_t j = static_cast<std::size_t>(std::find(group.begin(), group.end(), lead.front()) - group.begin());
  const std::size_t W = window_for(group.size());
  std::vector<double> xs, ys;
  for (std::size_t end = std::max(seq.size() / 2, W); end < seq.size(); ++end) {
    const double a = window_amplitudes(seq, group, R, end, W)[j];
    if (!(a > 0)) continue;
    // The amplitude is a window average, so it belongs to the window centre.
    xs.push_back(std::log(static_cast<double>(end) - 0.5 * static_cast<double>(W - 1)));
    ys.push_back(std::log(a));
  }
  if (xs.size() < 4) throw Error(ErrorKind::InsufficientData, "too few terms to fit alpha");
  AlphaFit out;
  out.raw = line_fit(xs, ys).first;
  if (auto s = snap_rational(out.raw)) {
    out.snapped = *s;
    out.is_snapped = true;
  }
  return out;
}

std::optional<AsymptoticForm> analyze(const Sequence& seq, const GuessOptions& opts) {
  auto rec = guess_recurrence(seq, opts);
  if (!rec) return std::nullopt;
  AsymptoticForm out;
  out.recurrence = *rec;
  out.chars = char_analysis(*rec);
  select_leading(out.chars, seq);
  const auto lead = out.chars.leading();
  if (lead.size() == 1 && lead.front()->real) {
    out.rho = lead.front()->re;
  } else {
    out.rho = lead.front()->modulus;
    out.modulus_only = true;
  }
  out.alpha = fit_alpha(seq, out.chars);
  const Real alpha = out.alpha.is_snapped ? to_real(out.alpha.snapped) : Real(out.alpha.raw);
  out.K = estimate_K(seq, out.rho, alpha, out.modulus_only || out.rho < 0);
  out.sign = classify_sign(out.chars, out.K.estimate);
  return out;
}

// ---------------------------------------------------------------- closed forms

Rat binomial(long a, long b) {
  if (b < 0) return 0;
  Rat r = 1;
  for (long i = 0; i < b; ++i) r *= frac(a - i, i + 1);
  return r;
}

namespace {

Rat rat_pow(const Rat& x, long e) {
  Rat r = 1;
  Rat b = e < 0 ? Rat(1 / x) : x;
  for (long k = 0; k < std::labs(e); ++k) r *= b;
  return r;
}

}  // namespace

Rat askey_coeff_closed_sum(unsigned n_, unsigned m_, unsigned k_, const Rat& eps) {
  const long n = n_, m = m_, k = k_;
  Rat sum = 0;
  for (long r = 0; r <= m; ++r)
    for (long t = 0; t <= k; ++t)
      for (long s = 0; s <= t; ++s) {
        Rat term = ((r + s) % 2 ? -1 : 1) * binomial(n, r) * binomial(n + m - r, m - r) * binomial(n + m - 2 * r, s) *
                   binomial(n + m - r + t - s, t - s) * binomial(r, k - t);
        if (term == 0) continue;
        term *= rat_pow(3 - eps, r + k - t + s) * rat_pow(3 - 2 * eps, k - t) * rat_pow(eps - 1, r - k + t + s);
        sum += term;
      }
  return sum;
}

std::optional<RatPoly> fit_polynomial(const Sequence& seq) {
  // diffs[k] = k-th forward differences.
  std::vector<Sequence> diffs{seq};
  while (diffs.back().size() > 1) {
    const Sequence& prev = diffs.back();
    Sequence next(prev.size() - 1);
    for (std::size_t i = 0; i + 1 < prev.size(); ++i) next[i] = prev[i + 1] - prev[i];
    diffs.push_back(std::move(next));
  }
  for (std::size_t d = 0; d + 3 <= seq.size(); ++d) {
    // Degree d: the (d+1)-th differences vanish; two extra samples confirm.
    const Sequence& nxt = diffs[d + 1];
    if (!std::all_of(nxt.begin(), nxt.end(), [](const Rat& v) { return v == 0; })) continue;
    RatPoly poly;
    RatPoly falling = RatPoly::constant(Rat(1));
    for (std::size_t k = 0; k <= d; ++k) {
      poly += falling * diffs[k][0];
      falling *= RatPoly({frac(-static_cast<long>(k), static_cast<long>(k + 1)), frac(1, static_cast<long>(k + 1))});
    }
    return poly;
  }
  return std::nullopt;
}

RatPoly section_poly_fit(const RatFun& f, const Rat& p, const Exponent& fixed, unsigned max_degree,
                         const ExpandOptions& opts) {
  if (fixed.size() + 1 != f.arity())
    throw Error(ErrorKind::InvalidArgument, "section needs one fixed index per remaining variable");
  const RatFun g = tp_transform(f, p);
  PathSpec path;
  path.direction.assign(f.arity(), 0);
  path.direction[0] = 1;
  path.offset = Exponent{0};
  path.offset.insert(path.offset.end(), fixed.begin(), fixed.end());
  const std::size_t most = max_degree + 3;
  for (std::size_t samples = std::min<std::size_t>(8, most);; samples = std::min(2 * samples, most)) {
    if (auto poly = fit_polynomial(extract_path(g, path, samples - 1, opts))) return *poly;
    if (samples == most) break;
  }
  throw Error(ErrorKind::NotPolynomial, "no polynomial of degree <= " + std::to_string(max_degree) +
                                            " fits the section");
}

}  // namespace poslab
