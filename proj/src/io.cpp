#include "poslab/io.hpp"

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "poslab/error.hpp"

namespace poslab::io {

std::string decimal(const Rat& r, int places, bool round_up) {
  BigInt scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(places));
  Rat scaled = r * Rat(scale);
  BigInt q;
  if (round_up)
    mpz_cdiv_q(q.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  else
    mpz_fdiv_q(q.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  const bool negative = q < 0;
  std::string digits = BigInt(abs(q)).get_str();
  if (places > 0) {
    const auto p = static_cast<std::size_t>(places);
    if (digits.size() <= p) digits.insert(0, p + 1 - digits.size(), '0');
    digits.insert(digits.size() - p, ".");
  }
  return negative ? "-" + digits : digits;
}

Json to_json(const Rat& r) { return to_string(r); }

Rat rat_from_json(const Json& j) { return parse_rat(j.get<std::string>()); }

Json to_json(const RatPoly& q) {
  Json out = Json::array();
  for (const auto& c : q.coeffs()) out.push_back(to_string(c));
  return out;
}

RatPoly poly_from_json(const Json& j) {
  std::vector<Rat> c;
  for (const auto& x : j) c.push_back(rat_from_json(x));
  return RatPoly(std::move(c));
}

Json to_json(const Exponent& e) { return Json(std::vector<unsigned>(e.begin(), e.end())); }

Json interval_json(const RootInterval& iv, int places) {
  return Json{{"lo", decimal(iv.lo, places, false)},
              {"hi", decimal(iv.hi, places, true)},
              {"precision", places},
              {"lo_exact", to_string(iv.lo)},
              {"hi_exact", to_string(iv.hi)}};
}

Json interval_json(const IntervalScalar& x, int digits) {
  return Json{{"lo", x.lo_string(digits)}, {"hi", x.hi_string(digits)}};
}

std::string TensorKey::canonical() const {
  std::ostringstream s;
  s << function << '|';
  for (const auto& v : vars) s << v << ',';
  s << '|' << to_string(mode) << '|' << p << '|' << box.to_string();
  if (mode == ExpandMode::Interval) s << '|' << precision;
  return s.str();
}

std::string TensorKey::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream s;
  s << std::hex;
  s.width(16);
  s.fill('0');
  s << h;
  return s.str();
}

namespace {

Json entry_json(const Rat& r) { return to_json(r); }
Json entry_json(const ParamPoly& q) { return to_json(q); }
Json entry_json(const IntervalScalar& x) { return interval_json(x, 40); }

}  // namespace

template <class Scalar>
Json tensor_json(const TensorKey& key, const CoeffBox<Scalar>& box) {
  Json entries = Json::array();
  for (const auto& e : box.entries()) entries.push_back(entry_json(e));
  Json out{{"vars", key.vars},
           {"box", box.box().upper},
           {"mode", to_string(key.mode)},
           {"p", key.p},
           {"function", key.function}};
  if (key.mode == ExpandMode::Interval) out["precision"] = key.precision;
  out["entries"] = std::move(entries);
  return out;
}

template Json tensor_json(const TensorKey&, const CoeffBox<Rat>&);
template Json tensor_json(const TensorKey&, const CoeffBox<ParamPoly>&);
template Json tensor_json(const TensorKey&, const CoeffBox<IntervalScalar>&);

std::optional<TensorCache> TensorCache::resolve(const std::optional<std::string>& flag) {
  if (const char* env = std::getenv("POSLAB_CACHE"); env && *env) return TensorCache(env);
  if (flag && !flag->empty()) return TensorCache(*flag);
  return std::nullopt;
}

std::filesystem::path TensorCache::path_for(const TensorKey& key) const { return dir_ / (key.hash() + ".json"); }

std::optional<Json> TensorCache::load(const TensorKey& key) const {
  std::ifstream in(path_for(key));
  if (!in) return std::nullopt;
  Json j = Json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.contains("entries")) return std::nullopt;
  if (j.value("function", "") != key.function || j.value("p", "") != key.p ||
      j.value("mode", "") != to_string(key.mode) || j["vars"] != Json(key.vars) || j["box"] != Json(key.box.upper))
    return std::nullopt;
  if (key.mode == ExpandMode::Interval && j.value("precision", 0L) != key.precision) return std::nullopt;
  return j;
}

void TensorCache::store(const TensorKey& key, const Json& tensor) const {
  std::filesystem::create_directories(dir_);
  const auto target = path_for(key);
  const auto tmp = target.string() + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write cache file " + tmp);
    out << tensor.dump() << '\n';
  }
  std::filesystem::rename(tmp, target);
}

Json report_json(const std::string& function, const DegreeBox& box, const PBound& b, int places) {
  Json out{{"function", function}, {"p", "symbolic"}, {"box", box.upper}};
  if (!b.bound)
    out["status"] = "no-bound";
  else
    out["status"] = b.at_origin ? "at-origin" : "bound";
  out["witness"] = b.bound ? to_json(b.witness) : Json(nullptr);
  out["witness_poly"] = b.bound ? to_json(b.witness_poly) : Json(nullptr);
  out["bound"] = b.bound ? interval_json(*b.bound, places) : Json(nullptr);
  out["cells_scanned"] = b.cells_scanned;
  out["escalations"] = 0;
  return out;
}

Json report_json(const std::string& function, const ScanReport& r) {
  Json out{{"function", function},
           {"p", to_string(r.p)},
           {"box", r.box.upper},
           {"status", r.all_positive ? "all-positive" : "nonpositive"},
           {"witness", r.witness ? to_json(*r.witness) : Json(nullptr)},
           {"witness_value", r.witness ? to_json(r.witness_value) : Json(nullptr)},
           {"bound", nullptr},
           {"cells_scanned", r.cells_scanned},
           {"escalations", r.escalations},
           {"interval_cells", r.interval_cells}};
  return out;
}

Json sequence_json(const std::string& function, const std::string& p, const PathSpec& path, const Sequence& s) {
  Json terms = Json::array();
  for (const auto& t : s) terms.push_back(to_string(t));
  return Json{{"function", function},
              {"p", p},
              {"direction", to_json(path.direction)},
              {"offset", to_json(path.offset)},
              {"N", s.empty() ? 0 : s.size() - 1},
              {"terms", std::move(terms)}};
}

Json to_json(const Recurrence& rec) {
  Json coeffs = Json::array();
  for (const auto& c : rec.coeffs) coeffs.push_back(to_json(c));
  return Json{{"order", rec.order()},
              {"degree", rec.degree()},
              {"verified_horizon", rec.verified_horizon},
              {"coeffs", std::move(coeffs)},
              {"text", rec.to_string()}};
}

Json to_json(const AsymptoticForm& a, int digits) {
  auto str = [digits](const Real& x) { return x.str(digits); };
  Json roots = Json::array();
  for (const auto& r : a.chars.roots) {
    Json j{{"re", str(r.re)},       {"im", str(r.im)},
           {"modulus", str(r.modulus)}, {"real", r.real},
           {"multiplicity", r.multiplicity}, {"dominant", r.dominant},
           {"leading", r.leading}};
    j["amplitude"] = r.amplitude >= 0 ? Json(r.amplitude) : Json(nullptr);
    roots.push_back(std::move(j));
  }
  Json alpha{{"raw", a.alpha.raw}, {"snapped", a.alpha.is_snapped ? Json(to_string(a.alpha.snapped)) : Json(nullptr)}};
  Json K{{"estimate", str(a.K.estimate)},
         {"spread", str(a.K.spread)},
         {"empirical_growth", str(a.K.empirical_growth)},
         {"terms", a.K.trend.size()}};
  return Json{{"recurrence", to_json(a.recurrence)},
              {"characteristic_polynomial", to_json(a.chars.poly)},
              {"roots", std::move(roots)},
              {"rho", str(a.rho)},
              {"modulus_only", a.modulus_only},
              {"alpha", std::move(alpha)},
              {"K", std::move(K)},
              {"sign", to_string(a.sign)}};
}

}  // namespace poslab::io
