#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <optional>
#include <string>
#include <vector>

#include "poslab/ratfun.hpp"
#include "poslab/series.hpp"

namespace poslab {

/// High-precision real for numeric asymptotics (about 266 bits).
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<80>>;

Real to_real(const Rat& r);

/// Lattice path n -> n*direction + offset.
struct PathSpec {
  Exponent direction;
  Exponent offset;

  Exponent at(std::size_t n) const;
  std::string to_string() const;
  /// Direction and offset as comma lists; an empty offset means zeros.
  static PathSpec parse(std::string_view direction, std::string_view offset, std::size_t arity);
};

using Sequence = std::vector<Rat>;

/// Terms a_0..a_N of T_p f along the path. The bounding box is expanded slab
/// by slab along its longest axis, keeping only as many slabs as the
/// denominator reaches back, so memory is one slab times that depth.
Sequence extract(const RatFun& f, const Rat& p, const PathSpec& path, std::size_t N, const ExpandOptions& opts = {});
/// Same for a function without the parameter (already transformed, or p-free).
Sequence extract_path(const RatFun& g, const PathSpec& path, std::size_t N, const ExpandOptions& opts = {});

/// sum_i coeffs[i](n) * a(n+i) = 0 for all n >= 0.
struct Recurrence {
  std::vector<RatPoly> coeffs;
  std::size_t verified_horizon = 0;

  unsigned order() const { return static_cast<unsigned>(coeffs.size()) - 1; }
  unsigned degree() const;
  /// Left-hand side at n (needs n + order < seq.size()).
  Rat residual(const Sequence& seq, std::size_t n) const;
  bool annihilates(const Sequence& seq) const;
  std::string to_string() const;
};

struct GuessOptions {
  unsigned max_order = 4;
  unsigned max_degree = 4;
  std::size_t guard = 10;
};

/// Minimal order, then minimal degree. Candidates come from an exact
/// fraction-free nullspace and must annihilate every remaining term,
/// including at least `guard` terms never used to solve.
/// Throws InsufficientData if seq is shorter than (max_order+1)(max_degree+2)+guard.
std::optional<Recurrence> guess_recurrence(const Sequence& seq, const GuessOptions& opts = {});

/// Continues seq to N+1 terms. Throws SingularRecurrence when the leading
/// coefficient vanishes at a needed index.
Sequence extend_by_recurrence(const Recurrence& rec, Sequence seq, std::size_t N);

struct CharRoot {
  Real re;
  Real im;
  Real modulus;
  bool real = false;
  unsigned multiplicity = 1;
  /// Largest modulus (within the relative gap).
  bool dominant = false;
  /// Among the dominant roots, carries the bulk of the sequence's tail.
  bool leading = false;
  /// Tail amplitude of this root's component; negative until weighed.
  double amplitude = -1;
};

struct CharAnalysis {
  /// sum_i [n^D] coeffs[i] x^i, D the recurrence degree.
  RatPoly poly;
  std::vector<CharRoot> roots;
  Real dominant_modulus;
  /// Modulus of the leading roots; zero until select_leading runs.
  Real leading_modulus;

  std::vector<const CharRoot*> dominant() const;
  /// Leading roots once weighed against a sequence, else the dominant ones.
  std::vector<const CharRoot*> leading() const;
};

inline constexpr double kDominanceGap = 1e-10;

/// Throws DegenerateLeading if the x^order coefficient vanishes.
CharAnalysis char_analysis(const Recurrence& rec);

/// exp of the slope of log|a_n| - alpha log n over the second half, read off a
/// short running maximum so sign changes do not drag it down.
Real tail_growth(const Sequence& seq, const Real& alpha = 0);

/// Marks the roots the sequence actually follows. The modulus is the one
/// nearest tail_growth(seq) (a root of larger modulus may have a zero
/// component); among roots of that modulus, least squares on the last window
/// of a_n / R^n gives each an amplitude, and those within half of the largest
/// are leading. Equal-modulus roots such as +27 and -27 are told apart this way.
void select_leading(CharAnalysis& chars, const Sequence& seq);

enum class SignBehavior { UltimatelyPositive, UltimatelyNegative, Oscillating, Unknown };
const char* to_string(SignBehavior s);

SignBehavior classify_sign(const CharAnalysis& chars, const std::optional<Real>& K);

struct KEstimate {
  /// (n, q_n) with q_n = a_n / (rho^n n^alpha), absolute values when `modulus`.
  std::vector<std::pair<std::size_t, Real>> trend;
  Real estimate;
  /// max - min of q over the last decile.
  Real spread;
  /// Growth rate fitted to the tail.
  Real empirical_growth;
};

/// Throws GrowthMismatch if |rho| is more than 10% off the tail growth.
KEstimate estimate_K(const Sequence& seq, const Real& rho, const Real& alpha, bool modulus,
                     std::size_t first = 1);

struct AlphaFit {
  double raw = 0;
  Rat snapped;
  bool is_snapped = false;
};

/// Least squares of log|a_n| - n log|rho| against log n over the second half.
AlphaFit fit_alpha(const Sequence& seq, const Real& rho_modulus);
/// Same fit on the amplitude of the leading roots' component, which removes
/// the interference of other dominant roots.
AlphaFit fit_alpha(const Sequence& seq, const CharAnalysis& chars);

/// Rational with denominator <= max_den within tol of x, if any.
std::optional<Rat> snap_rational(double x, unsigned max_den = 6, double tol = 1e-2);

struct AsymptoticForm {
  Recurrence recurrence;
  CharAnalysis chars;
  Real rho;
  bool modulus_only = false;
  AlphaFit alpha;
  KEstimate K;
  SignBehavior sign = SignBehavior::Unknown;
};

/// Guess, characteristic roots, alpha, K and sign for one sequence.
/// Empty when no recurrence is found within the bounds.
std::optional<AsymptoticForm> analyze(const Sequence& seq, const GuessOptions& opts = {});

/// The printed triple binomial sum for <x^n y^m z^k> T_{2-eps}(1/(1-x-y-z+4xyz)),
/// evaluated term by term with binomials taken as polynomials in the top index.
Rat askey_coeff_closed_sum(unsigned n, unsigned m, unsigned k, const Rat& eps);

/// Generalised binomial a(a-1)...(a-b+1)/b!, zero for b < 0.
Rat binomial(long a, long b);

/// Exact interpolating polynomial in n of a_{n, fixed...} (first variable
/// runs), verified on two extra samples. Throws NotPolynomial if no degree
/// below `max_degree` fits.
RatPoly section_poly_fit(const RatFun& f, const Rat& p, const Exponent& fixed, unsigned max_degree = 24,
                         const ExpandOptions& opts = {});

/// Smallest-degree polynomial through seq[0..], checked on two extra terms.
std::optional<RatPoly> fit_polynomial(const Sequence& seq);

}  // namespace poslab
