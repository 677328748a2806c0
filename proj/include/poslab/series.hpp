#pragma once

#include <cstddef>
#include <string>
#include <type_traits>
#include <vector>

#include "poslab/interval.hpp"
#include "poslab/ratfun.hpp"

namespace poslab {

/// Inclusive per-variable degree bounds.
struct DegreeBox {
  std::vector<unsigned> upper;

  std::size_t arity() const { return upper.size(); }
  /// Number of cells; saturates at SIZE_MAX instead of overflowing.
  std::size_t cells() const;
  unsigned max_total_degree() const;
  bool contains(const Exponent& e) const;
  std::string to_string() const;

  static DegreeBox cube(std::size_t arity, unsigned bound) { return {std::vector<unsigned>(arity, bound)}; }
  /// "4,4,4" or a single "4" broadcast to `arity` (when arity > 0).
  static DegreeBox parse(std::string_view text, std::size_t arity = 0);
};

enum class ExpandMode { Symbolic, ExactRational, Interval };
const char* to_string(ExpandMode m);

struct ExpandOptions {
  unsigned threads = 1;
  /// Cell budgets per mode.
  std::size_t max_cells = 2'000'000;
  std::size_t max_symbolic_cells = 10'000;
  /// Total cells visited by slab-streamed path extraction.
  std::size_t max_stream_cells = 200'000'000;
  mpfr_prec_t precision = kDefaultPrecision;
};

/// Row-major dense layout of a degree box (first variable varies slowest).
class BoxLayout {
 public:
  explicit BoxLayout(DegreeBox box);

  const DegreeBox& box() const noexcept { return box_; }
  std::size_t cells() const noexcept { return cells_; }
  std::size_t index(const Exponent& e) const;
  Exponent exponent(std::size_t flat) const;
  std::size_t stride(std::size_t var) const { return strides_[var]; }
  /// Flat indices grouped by total degree, each group in row-major order.
  std::vector<std::vector<std::size_t>> levels() const;

 private:
  DegreeBox box_;
  std::vector<std::size_t> strides_;
  std::size_t cells_;
};

/// Dense tensor of Taylor coefficients over a degree box.
template <class Scalar>
class CoeffBox {
 public:
  CoeffBox(DegreeBox box, std::vector<std::string> vars, std::vector<Scalar> entries)
      : layout_(std::move(box)), vars_(std::move(vars)), entries_(std::move(entries)) {}

  const DegreeBox& box() const noexcept { return layout_.box(); }
  const BoxLayout& layout() const noexcept { return layout_; }
  const std::vector<std::string>& vars() const noexcept { return vars_; }
  const std::vector<Scalar>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }

  const Scalar& operator()(const Exponent& e) const { return entries_.at(layout_.index(e)); }
  const Scalar& at(std::size_t flat) const { return entries_.at(flat); }

  static constexpr ExpandMode mode() {
    if constexpr (std::is_same_v<Scalar, ParamPoly>)
      return ExpandMode::Symbolic;
    else if constexpr (std::is_same_v<Scalar, Rat>)
      return ExpandMode::ExactRational;
    else
      return ExpandMode::Interval;
  }

 private:
  BoxLayout layout_;
  std::vector<std::string> vars_;
  std::vector<Scalar> entries_;
};

/// The convolution recurrence rescaled to integers. With
///   c[a] = (N[a] - sum_{b != 0} D[b] c[a-b]) / D[0]
/// and C[a] = scale * multiplier^|a| * c[a], every C[a] is an integer given by
///   C[a] = num[a] - sum_b den[b] * C[a-b].
/// `Coef` is BigInt (fixed p) or ZPoly (symbolic p).
template <class Coef>
struct ScaledSystem {
  struct Term {
    Exponent exponent;
    Coef coef;
  };
  std::vector<Term> num;
  std::vector<Term> den;  // nonzero exponents only
  BigInt scale = 1;
  BigInt multiplier = 1;
  /// Largest exponent of each variable among den terms.
  std::vector<unsigned> den_degree;
};

/// Throws NonExpandable if den(0) vanishes, IncompatibleModes if f still depends on p.
ScaledSystem<BigInt> scaled_system_exact(const RatFun& f);
/// Throws NonExpandable if den(0) vanishes or depends on p.
ScaledSystem<ZPoly> scaled_system_symbolic(const RatFun& f);

/// Exact coefficients kept as scaled integers (sign queries need no gcds).
struct ScaledBox {
  BoxLayout layout;
  std::vector<BigInt> values;
  BigInt scale;
  BigInt multiplier;

  int sign(std::size_t flat) const { return sgn(values[flat]); }
  Rat value(std::size_t flat) const;
};

ScaledBox expand_scaled(const RatFun& f, const DegreeBox& box, const ExpandOptions& opts = {});

CoeffBox<ParamPoly> expand_symbolic(const RatFun& f, const DegreeBox& box, const ExpandOptions& opts = {});
CoeffBox<Rat> expand_exact(const RatFun& f, const DegreeBox& box, const ExpandOptions& opts = {});
CoeffBox<IntervalScalar> expand_interval(const RatFun& f, const DegreeBox& box, const ExpandOptions& opts = {});

template <class Scalar>
CoeffBox<Scalar> expand(const RatFun& f, const DegreeBox& box, const ExpandOptions& opts = {}) {
  if constexpr (std::is_same_v<Scalar, ParamPoly>)
    return expand_symbolic(f, box, opts);
  else if constexpr (std::is_same_v<Scalar, Rat>)
    return expand_exact(f, box, opts);
  else
    return expand_interval(f, box, opts);
}

/// Single coefficient via the minimal sub-box.
template <class Scalar>
Scalar coeff(const RatFun& f, const Exponent& e, const ExpandOptions& opts = {}) {
  DegreeBox box{std::vector<unsigned>(e.begin(), e.end())};
  return expand<Scalar>(f, box, opts)(e);
}

/// Test oracle: sum_k (1 - D/D0)^k N/D0 by explicit truncated polynomial
/// products; no convolution recurrence. At most 10^4 cells.
CoeffBox<ParamPoly> brute_expand(const RatFun& f, const DegreeBox& box);

/// den * box == num on the given cells (exact).
bool reconvolution_holds(const RatFun& f, const CoeffBox<Rat>& box, const std::vector<std::size_t>& cells);
bool reconvolution_holds(const RatFun& f, const CoeffBox<ParamPoly>& box, const std::vector<std::size_t>& cells);

}  // namespace poslab
