#include "poslab/scan.hpp"

#include <mutex>
#include <stdexcept>

#include "poslab/error.hpp"
#include "poslab/parallel.hpp"

namespace poslab {

namespace {

struct Candidate {
  std::size_t flat;
  ZPoly poly;
  NonpositivityPoint point;
};

// Strictly better: smaller point, or the same point at a smaller cell.
bool better(const Candidate& a, const Candidate& b) {
  if (a.point.at_origin != b.point.at_origin) return a.point.at_origin;
  if (a.point.at_origin) return a.flat < b.flat;
  int c = compare_roots(a.poly, a.point.where, b.poly, b.point.where);
  return c < 0 || (c == 0 && a.flat < b.flat);
}

const Rat& coarse_tolerance() {
  static const Rat t(1, 1 << 20);
  return t;
}

}  // namespace

PBound pmax_upper_bound(const RatFun& f, const DegreeBox& box, const ScanOptions& opts) {
  if (!f.param_free()) throw Error(ErrorKind::IncompatibleModes, "pmax scan expects a function free of p");
  return pmax_upper_bound_of_transformed(tp_transform(f, SymbolicParam{}), box, opts);
}

PBound pmax_upper_bound_of_transformed(const RatFun& tf, const DegreeBox& box, const ScanOptions& opts) {
  if (tf.mode.kind != ParamMode::Kind::Symbolic)
    throw Error(ErrorKind::IncompatibleModes, "pmax scan needs the symbolic parameter");
  const CoeffBox<ParamPoly> coeffs = expand_symbolic(tf, box, opts.expand);

  std::optional<Candidate> best;
  std::mutex best_mutex;
  auto current_cut = [&]() -> std::optional<Rat> {
    std::lock_guard lock(best_mutex);
    if (!best) return std::nullopt;
    return best->point.where.hi;
  };
  auto offer = [&](Candidate c) {
    std::lock_guard lock(best_mutex);
    if (!best || better(c, *best)) best = std::move(c);
  };

  parallel_for(coeffs.size(), opts.expand.threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t flat = begin; flat < end; ++flat) {
      const ParamPoly& c = coeffs.at(flat);
      if (c.is_zero()) {
        offer({flat, {}, {{Rat(0), Rat(0)}, true}});
        continue;
      }
      ZPoly z = primitive_part(c);
      // A cell can only win if its point is at most the current best's upper end.
      auto pt = smallest_nonpositivity_point(z, coarse_tolerance(), current_cut());
      if (pt) offer({flat, std::move(z), *pt});
    }
  });

  PBound out;
  out.cells_scanned = coeffs.size();
  if (!best) return out;
  out.witness = coeffs.layout().exponent(best->flat);
  out.witness_poly = coeffs.at(best->flat);
  out.at_origin = best->point.at_origin;
  if (out.at_origin) {
    out.bound = RootInterval{Rat(0), Rat(0)};
  } else {
    auto fine = smallest_nonpositivity_point(best->poly, opts.tolerance);
    out.bound = fine->where;
  }
  return out;
}

int compare_bounds(const PBound& a, const PBound& b) {
  if (!a.bound || !b.bound) return a.bound ? -1 : (b.bound ? 1 : 0);
  if (a.at_origin || b.at_origin) return a.at_origin == b.at_origin ? 0 : (a.at_origin ? -1 : 1);
  return compare_roots(primitive_part(a.witness_poly), *a.bound, primitive_part(b.witness_poly), *b.bound);
}

std::vector<PBound> bound_vs_box_profile(const RatFun& f, const std::vector<DegreeBox>& boxes,
                                         const ScanOptions& opts) {
  for (std::size_t i = 1; i < boxes.size(); ++i)
    for (std::size_t v = 0; v < boxes[i].arity(); ++v)
      if (boxes[i].upper.at(v) < boxes[i - 1].upper.at(v))
        throw Error(ErrorKind::InvalidArgument, "profile boxes must be nested and ascending");
  if (!f.param_free()) throw Error(ErrorKind::IncompatibleModes, "profile expects a function free of p");
  const RatFun tf = tp_transform(f, SymbolicParam{});
  std::vector<PBound> out;
  for (const auto& box : boxes) {
    out.push_back(pmax_upper_bound_of_transformed(tf, box, opts));
    if (out.size() > 1 && compare_bounds(out.back(), out[out.size() - 2]) > 0)
      throw std::logic_error("bound grew with a larger box " + box.to_string());
  }
  return out;
}

namespace {

// Exact coefficients for the given cells; each is computed from the smallest
// box containing all of them.
std::vector<Rat> exact_cells(const RatFun& tf, const BoxLayout& layout, const std::vector<std::size_t>& cells,
                             const ExpandOptions& opts) {
  DegreeBox cover{std::vector<unsigned>(layout.box().arity(), 0)};
  for (std::size_t flat : cells) {
    Exponent e = layout.exponent(flat);
    for (std::size_t i = 0; i < e.size(); ++i) cover.upper[i] = std::max(cover.upper[i], e[i]);
  }
  ScaledBox sb = expand_scaled(tf, cover, opts);
  std::vector<Rat> out;
  for (std::size_t flat : cells) out.push_back(sb.value(sb.layout.index(layout.exponent(flat))));
  return out;
}

}  // namespace

ScanReport positivity_at(const RatFun& f, const Rat& p, const DegreeBox& box, ScanStrategy strategy,
                         const ExpandOptions& opts) {
  if (p <= 0) throw Error(ErrorKind::InvalidArgument, "positivity scan needs p > 0");
  if (!f.param_free()) throw Error(ErrorKind::IncompatibleModes, "positivity scan expects a function free of p");
  const RatFun tf = tp_transform(f, p);
  ScanReport report;
  report.p = p;
  report.box = box;
  BoxLayout layout(box);
  report.cells_scanned = layout.cells();

  auto fail_at = [&](std::size_t flat, const Rat& value) {
    report.all_positive = false;
    report.witness = layout.exponent(flat);
    report.witness_value = value;
  };

  if (strategy == ScanStrategy::ExactOnly) {
    ScaledBox sb = expand_scaled(tf, box, opts);
    for (std::size_t flat = 0; flat < sb.values.size(); ++flat)
      if (sb.sign(flat) <= 0) {
        fail_at(flat, sb.value(flat));
        break;
      }
    return report;
  }

  std::vector<std::size_t> escalate;
  {
    const CoeffBox<IntervalScalar> iv = expand_interval(tf, box, opts);
    report.interval_cells = iv.size();
    for (std::size_t flat = 0; flat < iv.size(); ++flat) {
      const IntervalScalar& c = iv.at(flat);
      if (c.certainly_positive() && c.relative_width() <= kEscalationWidth) continue;
      escalate.push_back(flat);
    }
  }
  report.escalations = escalate.size();
  if (escalate.empty()) return report;
  std::vector<Rat> exact = exact_cells(tf, layout, escalate, opts);
  for (std::size_t i = 0; i < escalate.size(); ++i)
    if (exact[i] <= 0) {
      fail_at(escalate[i], exact[i]);
      break;
    }
  return report;
}

}  // namespace poslab
