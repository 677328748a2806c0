#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <optional>
#include <string>

#include "poslab/algebraic.hpp"
#include "poslab/error.hpp"
#include "poslab/io.hpp"
#include "poslab/repro.hpp"
#include "poslab/scan.hpp"
#include "poslab/seq.hpp"

using namespace poslab;
using io::Json;

namespace {

enum Exit { kOk = 0, kFailed = 1, kUsage = 2, kMath = 3, kBudget = 4 };

struct RunConfig {
  std::string function;
  std::string vars = "x,y,z";
  std::string p = "symbolic";
  std::string box;
  std::string mode;
  unsigned threads = 1;
  long precision = kDefaultPrecision;
  std::string out = "json";
  std::optional<std::string> cache;
  unsigned max_order = 4;
  unsigned max_degree = 4;
  std::size_t N = 40;

  RatFun parsed() const { return parse_ratfun(function, parse_var_list(vars)); }
  TransformParam param() const { return parse_transform_param(p); }
  Rat rational_p() const {
    auto t = param();
    if (!std::holds_alternative<Rat>(t)) throw Error(ErrorKind::InvalidArgument, "--p must be a rational here");
    return std::get<Rat>(t);
  }
  ExpandOptions expand() const {
    ExpandOptions o;
    o.threads = threads;
    o.precision = precision;
    return o;
  }
  ExpandMode expand_mode() const {
    if (mode.empty()) return std::holds_alternative<Rat>(param()) ? ExpandMode::ExactRational : ExpandMode::Symbolic;
    if (mode == "exact") return ExpandMode::ExactRational;
    if (mode == "interval") return ExpandMode::Interval;
    if (mode == "symbolic") return ExpandMode::Symbolic;
    throw Error(ErrorKind::InvalidArgument, "unknown mode '" + mode + "'");
  }
  DegreeBox parsed_box(std::size_t arity) const { return DegreeBox::parse(box, arity); }
  /// Decimal places that carry the working precision.
  int places() const { return static_cast<int>(std::ceil(static_cast<double>(precision) * std::log10(2.0))); }
  bool csv() const { return out == "csv"; }
};

void print(const Json& j) { std::cout << j.dump(2) << '\n'; }

std::string exponent_csv(const Exponent& e) {
  std::string s;
  for (unsigned x : e) s += std::to_string(x) + ",";
  return s;
}

std::string entry_text(const Rat& r) { return to_string(r); }
std::string entry_text(const ParamPoly& q) { return q.to_string("p"); }
std::string entry_text(const IntervalScalar& x) { return "[" + x.lo_string(40) + "; " + x.hi_string(40) + "]"; }

template <class Scalar>
void emit_tensor(const RunConfig& cfg, const io::TensorKey& key, const CoeffBox<Scalar>& box) {
  if (cfg.csv()) {
    for (std::size_t i = 0; i < box.size(); ++i)
      std::cout << exponent_csv(box.layout().exponent(i)) << entry_text(box.at(i)) << '\n';
    return;
  }
  print(io::tensor_json(key, box));
}

int cmd_transform(const RunConfig& cfg) {
  RatFun t = tp_transform(cfg.parsed(), cfg.param());
  if (cfg.csv())
    std::cout << t.to_string() << '\n';
  else
    print(Json{{"function", cfg.function}, {"p", cfg.p}, {"result", t.to_string()}});
  return kOk;
}

int cmd_pmax(const RunConfig& cfg) {
  RatFun f = cfg.parsed();
  ScanOptions opts;
  opts.expand = cfg.expand();
  DegreeBox box = cfg.parsed_box(f.arity());
  print(io::report_json(cfg.function, box, pmax_upper_bound(f, box, opts), cfg.places()));
  return kOk;
}

int cmd_scan(const RunConfig& cfg, const std::string& strategy) {
  RatFun f = cfg.parsed();
  ScanStrategy s = ScanStrategy::IntervalFirst;
  if (strategy == "exact")
    s = ScanStrategy::ExactOnly;
  else if (strategy != "interval")
    throw Error(ErrorKind::InvalidArgument, "unknown strategy '" + strategy + "'");
  print(io::report_json(cfg.function, positivity_at(f, cfg.rational_p(), cfg.parsed_box(f.arity()), s, cfg.expand())));
  return kOk;
}

int cmd_coeff(const RunConfig& cfg, const std::string& exponent) {
  RatFun t = tp_transform(cfg.parsed(), cfg.param());
  Exponent e = DegreeBox::parse(exponent, t.arity()).upper;
  std::string value;
  switch (cfg.expand_mode()) {
    case ExpandMode::Symbolic: value = entry_text(coeff<ParamPoly>(t, e, cfg.expand())); break;
    case ExpandMode::ExactRational: value = entry_text(coeff<Rat>(t, e, cfg.expand())); break;
    case ExpandMode::Interval: value = entry_text(coeff<IntervalScalar>(t, e, cfg.expand())); break;
  }
  if (cfg.csv())
    std::cout << exponent_csv(e) << value << '\n';
  else
    print(Json{{"function", cfg.function}, {"p", cfg.p}, {"exponent", io::to_json(e)},
               {"mode", to_string(cfg.expand_mode())}, {"value", value}});
  return kOk;
}

int cmd_expand(const RunConfig& cfg) {
  RatFun t = tp_transform(cfg.parsed(), cfg.param());
  io::TensorKey key{cfg.function, t.vars, cfg.expand_mode(), cfg.p, cfg.parsed_box(t.arity()), cfg.precision};
  auto cache = io::TensorCache::resolve(cfg.cache);
  if (cache && !cfg.csv()) {
    if (auto hit = cache->load(key)) {
      print(*hit);
      return kOk;
    }
  }
  auto finish = [&](const auto& box) {
    if (cache) cache->store(key, io::tensor_json(key, box));
    emit_tensor(cfg, key, box);
  };
  switch (key.mode) {
    case ExpandMode::Symbolic: finish(expand_symbolic(t, key.box, cfg.expand())); break;
    case ExpandMode::ExactRational: finish(expand_exact(t, key.box, cfg.expand())); break;
    case ExpandMode::Interval: finish(expand_interval(t, key.box, cfg.expand())); break;
  }
  return kOk;
}

struct PathArgs {
  std::string direction;
  std::string offset;
};

Sequence extracted(const RunConfig& cfg, const PathArgs& pa, PathSpec& path) {
  RatFun f = cfg.parsed();
  path = PathSpec::parse(pa.direction, pa.offset, f.arity());
  return extract(f, cfg.rational_p(), path, cfg.N, cfg.expand());
}

int cmd_extract(const RunConfig& cfg, const PathArgs& pa) {
  PathSpec path;
  Sequence s = extracted(cfg, pa, path);
  if (cfg.csv()) {
    std::cout << "n,a_n\n";
    for (std::size_t n = 0; n < s.size(); ++n) std::cout << n << ',' << to_string(s[n]) << '\n';
  } else {
    print(io::sequence_json(cfg.function, cfg.p, path, s));
  }
  return kOk;
}

GuessOptions guess_options(const RunConfig& cfg) { return {cfg.max_order, cfg.max_degree, 10}; }

int cmd_guess(const RunConfig& cfg, const PathArgs& pa) {
  PathSpec path;
  Sequence s = extracted(cfg, pa, path);
  auto rec = guess_recurrence(s, guess_options(cfg));
  Json out{{"function", cfg.function}, {"p", cfg.p}, {"direction", io::to_json(path.direction)},
           {"offset", io::to_json(path.offset)}, {"N", cfg.N}};
  out["recurrence"] = rec ? io::to_json(*rec) : Json(nullptr);
  if (cfg.csv())
    std::cout << (rec ? rec->to_string() : std::string("none")) << '\n';
  else
    print(out);
  return kOk;
}

int cmd_asympt(const RunConfig& cfg, const PathArgs& pa) {
  PathSpec path;
  Sequence s = extracted(cfg, pa, path);
  auto a = analyze(s, guess_options(cfg));
  Json out{{"function", cfg.function}, {"p", cfg.p}, {"direction", io::to_json(path.direction)},
           {"offset", io::to_json(path.offset)}, {"N", cfg.N}};
  out["asymptotics"] = a ? io::to_json(*a, 20) : Json(nullptr);
  print(out);
  return kOk;
}

int cmd_kplot(const RunConfig& cfg, const PathArgs& pa, std::size_t extend, const std::string& rho_text,
              const std::string& alpha_text) {
  PathSpec path;
  Sequence s = extracted(cfg, pa, path);
  std::optional<AsymptoticForm> a;
  if (extend > s.size() - 1 || rho_text.empty() || alpha_text.empty()) {
    a = analyze(s, guess_options(cfg));
    if (!a) throw Error(ErrorKind::InsufficientData, "no recurrence found; pass --rho and --alpha");
  }
  if (extend > s.size() - 1) s = extend_by_recurrence(a->recurrence, s, extend);
  const Real rho = rho_text.empty() ? a->rho : to_real(parse_rat(rho_text));
  Real alpha;
  if (!alpha_text.empty())
    alpha = to_real(parse_rat(alpha_text));
  else
    alpha = a->alpha.is_snapped ? to_real(a->alpha.snapped) : Real(a->alpha.raw);
  const bool modulus = rho < 0 || (a && a->modulus_only);
  KEstimate k = estimate_K(s, rho, alpha, modulus);
  std::cout << "n,q_n\n";
  for (const auto& [n, q] : k.trend) std::cout << n << ',' << q.str(20) << '\n';
  return kOk;
}

int cmd_convergents(const std::string& minpoly, const std::string& bracket, std::size_t count, bool csv) {
  auto comma = bracket.find(',');
  if (comma == std::string::npos) throw Error(ErrorKind::InvalidArgument, "--bracket expects lo,hi");
  AlgebraicNumber a(parse_param_poly(minpoly), parse_rat(bracket.substr(0, comma)), parse_rat(bracket.substr(comma + 1)));
  auto cs = convergents(a, count);
  if (csv) {
    for (const auto& c : cs) std::cout << to_string(c) << '\n';
  } else {
    Json list = Json::array();
    for (const auto& c : cs) list.push_back(to_string(c));
    print(Json{{"minpoly", minpoly}, {"bracket", bracket}, {"convergents", std::move(list)}});
  }
  return kOk;
}

int cmd_repro(unsigned threads, const std::vector<int>& only) {
  bool all = true;
  for (const auto& c : repro::criteria()) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    auto r = repro::run(c, threads);
    std::cout << repro::format(r) << std::endl;
    all = all && r.pass;
  }
  return all ? kOk : kFailed;
}

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Syntax:
    case ErrorKind::UnknownIdentifier:
    case ErrorKind::InvalidArgument:
      return kUsage;
    case ErrorKind::BudgetExceeded:
      return kBudget;
    default:
      return kMath;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Positivity experiments for the T_p transform of multivariate rational functions"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_function = [&](CLI::App* sub) {
    sub->add_option("function", cfg.function, "Rational function, e.g. \"1/(1-x-y-z+4*x*y*z)\"")->required();
    sub->add_option("--vars", cfg.vars, "Variable names, comma separated")->capture_default_str();
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--precision", cfg.precision, "Interval precision in bits")
        ->check(CLI::Range(64L, 1L << 20))
        ->capture_default_str();
    sub->add_option("--out", cfg.out, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  };
  auto add_p = [&](CLI::App* sub) {
    sub->add_option("--p", cfg.p, "Parameter: symbolic, a rational a/b, or alg:<minpoly>")->capture_default_str();
  };
  auto add_box = [&](CLI::App* sub) {
    sub->add_option("--box", cfg.box, "Inclusive degree bounds, e.g. 10,10,10 or 10")->required();
  };
  PathArgs path;
  std::size_t extend = 0;
  std::string rho, alpha;
  auto add_seq = [&](CLI::App* sub) {
    add_function(sub);
    add_p(sub);
    add_common(sub);
    sub->add_option("--direction", path.direction, "Path direction, e.g. 1,1,1")->required();
    sub->add_option("--offset", path.offset, "Path offset (default zeros)");
    sub->add_option("--N", cfg.N, "Last index n")->capture_default_str();
    sub->add_option("--max-order", cfg.max_order, "Recurrence order bound")->capture_default_str();
    sub->add_option("--max-degree", cfg.max_degree, "Recurrence degree bound")->capture_default_str();
  };

  auto* transform = app.add_subcommand("transform", "Print T_p f");
  add_function(transform);
  add_p(transform);
  add_common(transform);

  auto* pmax = app.add_subcommand("pmax", "Upper bound on p_max over a box (symbolic p)");
  add_function(pmax);
  add_box(pmax);
  add_common(pmax);

  std::string strategy = "interval";
  auto* scan = app.add_subcommand("scan", "Check every coefficient on a box at a fixed p");
  add_function(scan);
  add_p(scan);
  add_box(scan);
  add_common(scan);
  scan->add_option("--strategy", strategy, "interval (interval-first) or exact")->capture_default_str();

  std::string exponent;
  auto* coeffc = app.add_subcommand("coeff", "One coefficient of T_p f");
  add_function(coeffc);
  add_p(coeffc);
  add_common(coeffc);
  coeffc->add_option("--exponent", exponent, "Exponent vector, e.g. 1,1,1")->required();
  coeffc->add_option("--mode", cfg.mode, "exact, interval or symbolic");

  auto* expandc = app.add_subcommand("expand", "Coefficient tensor of T_p f over a box");
  add_function(expandc);
  add_p(expandc);
  add_box(expandc);
  add_common(expandc);
  expandc->add_option("--mode", cfg.mode, "exact, interval or symbolic");
  expandc->add_option("--cache", cfg.cache, "Tensor cache directory (POSLAB_CACHE overrides)");

  auto* extractc = app.add_subcommand("extract", "Terms of T_p f along a lattice path");
  add_seq(extractc);
  auto* guess = app.add_subcommand("guess", "Guess a P-finite recurrence for a path");
  add_seq(guess);
  auto* asympt = app.add_subcommand("asympt", "Recurrence, characteristic roots, alpha, K and sign");
  add_seq(asympt);
  auto* kplot = app.add_subcommand("kplot", "CSV of q_n = a_n / (rho^n n^alpha)");
  add_seq(kplot);
  kplot->add_option("--extend", extend, "Continue the terms to this index with the guessed recurrence");
  kplot->add_option("--rho", rho, "Growth base (default: from the recurrence)");
  kplot->add_option("--alpha", alpha, "Exponent (default: fitted)");

  std::string minpoly, bracket;
  std::size_t count = 20;
  auto* conv = app.add_subcommand("convergents", "Continued-fraction convergents of an algebraic number");
  conv->add_option("--minpoly", minpoly, "Polynomial in p, e.g. 2*p^3-3*p^2-1")->required();
  conv->add_option("--bracket", bracket, "lo,hi isolating the root")->required();
  conv->add_option("--count", count, "Number of convergents")->capture_default_str();
  conv->add_option("--out", cfg.out, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();

  std::vector<int> only;
  auto* reproc = app.add_subcommand("repro", "Run the regression suite and print a PASS/FAIL table");
  reproc->add_option("--threads", cfg.threads, "Worker threads")->check(CLI::PositiveNumber);
  reproc->add_option("--only", only, "Criterion ids")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*transform) return cmd_transform(cfg);
    if (*pmax) return cmd_pmax(cfg);
    if (*scan) return cmd_scan(cfg, strategy);
    if (*coeffc) return cmd_coeff(cfg, exponent);
    if (*expandc) return cmd_expand(cfg);
    if (*extractc) return cmd_extract(cfg, path);
    if (*guess) return cmd_guess(cfg, path);
    if (*asympt) return cmd_asympt(cfg, path);
    if (*kplot) return cmd_kplot(cfg, path, extend, rho, alpha);
    if (*conv) return cmd_convergents(minpoly, bracket, count, cfg.csv());
    if (*reproc) return cmd_repro(cfg.threads, only);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kMath;
  }
  return kUsage;
}
