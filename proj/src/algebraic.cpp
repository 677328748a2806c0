#include "poslab/algebraic.hpp"

#include <algorithm>

#include "poslab/error.hpp"

namespace poslab {

namespace {

ZPoly zshift(ZPoly z, const BigInt& s) {
  const std::size_t n = z.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j > i; --j) z[j - 1] += s * z[j];
  return z;
}

// Exact floor of the unique root of z in the open interval (lo, hi), where z
// changes sign across it. Narrows [lo, hi] until no integer lies strictly
// inside, or reports that the root is an integer.
struct FloorResult {
  BigInt floor;
  bool root_is_integer;
};

FloorResult root_floor(const ZPoly& z, Rat& lo, Rat& hi) {
  const int s_lo = sign_at(z, lo);
  while (true) {
    BigInt fl = floor_rat(lo);
    BigInt fh = floor_rat(hi);
    if (hi.get_den() == 1) fh -= 1;
    if (fl == fh) return {fl, false};
    BigInt k = floor_rat((lo + hi) / 2);
    if (k <= fl) k = fl + 1;
    if (k > fh) k = fh;
    int sk = sign_at(z, Rat(k));
    if (sk == 0) return {k, true};
    if (sk == s_lo)
      lo = Rat(k);
    else
      hi = Rat(k);
  }
}

void append_rational_cf(Rat r, std::vector<BigInt>& out, std::size_t count) {
  while (out.size() < count) {
    BigInt f = floor_rat(r);
    out.push_back(f);
    Rat frac = r - Rat(f);
    if (frac == 0) break;
    r = 1 / frac;
  }
}

}  // namespace

AlgebraicNumber::AlgebraicNumber(const RatPoly& poly, const Rat& lo, const Rat& hi) {
  if (poly.degree() < 1) throw Error(ErrorKind::InvalidArgument, "algebraic number needs a nonconstant polynomial");
  if (hi < lo) throw Error(ErrorKind::InvalidArgument, "empty bracket");
  poly_ = primitive_part(squarefree_part(poly));
  SturmChain chain(poly_);
  int count = chain.count(lo, hi) + (sign_at(poly_, lo) == 0 ? 1 : 0);
  if (count != 1)
    throw Error(ErrorKind::InvalidArgument,
                "bracket holds " + std::to_string(count) + " roots of " + poly.to_string("x") + ", expected 1");
  if (sign_at(poly_, lo) == 0)
    bracket_ = {lo, lo};
  else if (sign_at(poly_, hi) == 0)
    bracket_ = {hi, hi};
  else
    bracket_ = {lo, hi};
}

RootInterval AlgebraicNumber::refined(const Rat& tol) const { return refine(poly_, bracket_, tol); }

std::vector<BigInt> partial_quotients(const AlgebraicNumber& a, std::size_t count) {
  std::vector<BigInt> out;
  if (count == 0) return out;
  if (a.bracket().exact()) {
    append_rational_cf(a.bracket().lo, out, count);
    return out;
  }
  ZPoly z = a.minpoly();
  Rat lo = a.bracket().lo;
  Rat hi = a.bracket().hi;
  while (out.size() < count) {
    FloorResult fr = root_floor(z, lo, hi);
    if (mpz_sizeinbase(fr.floor.get_mpz_t(), 10) > kMaxPartialQuotientDigits)
      throw Error(ErrorKind::InvalidArgument, "partial quotient exceeds digit cap");
    if (fr.root_is_integer) {
      out.push_back(fr.floor);
      break;
    }
    // Keep the bracket off the integer so the inverted bracket stays finite.
    const Rat fl(fr.floor);
    const int s_lo = sign_at(z, lo);
    while (lo == fl) {
      Rat m = (lo + hi) / 2;
      int sm = sign_at(z, m);
      if (sm == 0) {
        append_rational_cf(m, out, count);
        return out;
      }
      (sm == s_lo ? lo : hi) = m;
    }
    out.push_back(fr.floor);
    // y = 1/(x - floor): y^d z(floor + 1/y), i.e. Taylor shift then reverse.
    z = zshift(std::move(z), fr.floor);
    std::reverse(z.begin(), z.end());
    trim(z);
    Rat new_lo = 1 / (hi - fl);
    Rat new_hi = 1 / (lo - fl);
    lo = std::move(new_lo);
    hi = std::move(new_hi);
  }
  return out;
}

std::vector<Rat> convergents(const AlgebraicNumber& a, std::size_t count) {
  std::vector<Rat> out;
  BigInt h_prev = 1, h_prev2 = 0, k_prev = 0, k_prev2 = 1;
  for (const BigInt& q : partial_quotients(a, count)) {
    BigInt h = q * h_prev + h_prev2;
    BigInt k = q * k_prev + k_prev2;
    out.emplace_back(h, k);
    out.back().canonicalize();
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
  }
  return out;
}

}  // namespace poslab
