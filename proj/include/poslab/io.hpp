#pragma once

#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "poslab/scan.hpp"
#include "poslab/seq.hpp"
#include "poslab/series.hpp"

namespace poslab::io {

using Json = nlohmann::ordered_json;

/// r with `places` digits after the point, rounded down (or up).
std::string decimal(const Rat& r, int places, bool round_up);

Json to_json(const Rat& r);
Rat rat_from_json(const Json& j);
/// Coefficient strings, constant term first.
Json to_json(const RatPoly& q);
RatPoly poly_from_json(const Json& j);
Json to_json(const Exponent& e);

/// {lo, hi, precision, lo_exact, hi_exact}: decimals rounded outward to
/// `places` digits after the point, plus the exact endpoints.
Json interval_json(const RootInterval& iv, int places);
/// {lo, hi} rounded outward to `digits` significant digits.
Json interval_json(const IntervalScalar& x, int digits);

/// What a cached tensor is keyed on.
struct TensorKey {
  std::string function;
  std::vector<std::string> vars;
  ExpandMode mode;
  std::string p;
  DegreeBox box;
  mpfr_prec_t precision = kDefaultPrecision;

  std::string canonical() const;
  /// FNV-1a of canonical(), as 16 hex digits.
  std::string hash() const;
};

/// {vars, box, mode, p, function, precision, entries} with entries flattened
/// row-major: "num/den" strings, coefficient lists, or {lo, hi} pairs.
template <class Scalar>
Json tensor_json(const TensorKey& key, const CoeffBox<Scalar>& box);

/// Tensor files under a directory, one per key. A file whose stored key does
/// not match is ignored.
class TensorCache {
 public:
  explicit TensorCache(std::filesystem::path dir) : dir_(std::move(dir)) {}
  /// POSLAB_CACHE if set, else `flag`, else no cache.
  static std::optional<TensorCache> resolve(const std::optional<std::string>& flag);

  std::optional<Json> load(const TensorKey& key) const;
  void store(const TensorKey& key, const Json& tensor) const;
  std::filesystem::path path_for(const TensorKey& key) const;

 private:
  std::filesystem::path dir_;
};

/// The common report shape {function, p, box, status, witness, bound,
/// cells_scanned, escalations} plus command-specific fields.
Json report_json(const std::string& function, const DegreeBox& box, const PBound& b, int places);
Json report_json(const std::string& function, const ScanReport& r);

Json sequence_json(const std::string& function, const std::string& p, const PathSpec& path, const Sequence& s);
Json to_json(const Recurrence& rec);
Json to_json(const AsymptoticForm& a, int digits);

}  // namespace poslab::io
