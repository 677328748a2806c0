#include "poslab/roots.hpp"

#include <algorithm>

#include "poslab/error.hpp"

namespace poslab {

namespace {

ZPoly zderivative(const ZPoly& z) {
  ZPoly d;
  for (std::size_t i = 1; i < z.size(); ++i) d.push_back(z[i] * static_cast<unsigned long>(i));
  trim(d);
  return d;
}

void make_primitive(ZPoly& z) {
  BigInt g = 0;
  for (const auto& c : z) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g > 1)
    for (auto& c : z) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
}

// lc(b)^(da-db+1) * a mod b.
ZPoly pseudo_remainder(ZPoly a, const ZPoly& b) {
  const int db = degree(b);
  const BigInt& lb = b.back();
  for (int i = degree(a); i >= db; --i) {
    BigInt c = a[static_cast<std::size_t>(i)];
    for (auto& x : a) x *= lb;
    if (c != 0)
      for (int j = 0; j <= db; ++j)
        mpz_submul(a[static_cast<std::size_t>(i - db + j)].get_mpz_t(), c.get_mpz_t(),
                   b[static_cast<std::size_t>(j)].get_mpz_t());
    a.pop_back();
  }
  trim(a);
  return a;
}

ZPoly squarefree_primitive(const ZPoly& z) {
  if (degree(z) < 1) return z;
  return primitive_part(squarefree_part(to_rat_poly(z)));
}

}  // namespace

Rat default_tolerance() {
  Rat t(1);
  mpz_mul_2exp(t.get_den_mpz_t(), t.get_den_mpz_t(), 80);
  return t;
}

SturmChain::SturmChain(const ZPoly& squarefree) {
  if (squarefree.empty()) throw Error(ErrorKind::ZeroPolynomial, "Sturm chain of zero polynomial");
  chain_.push_back(squarefree);
  ZPoly d = zderivative(squarefree);
  if (d.empty()) return;
  make_primitive(d);
  chain_.push_back(std::move(d));
  while (degree(chain_.back()) > 0) {
    const ZPoly& a = chain_[chain_.size() - 2];
    const ZPoly& b = chain_.back();
    ZPoly r = pseudo_remainder(a, b);
    if (r.empty()) break;
    const int delta = degree(a) - degree(b);
    const bool factor_negative = sgn(b.back()) < 0 && (delta + 1) % 2 == 1;
    if (!factor_negative)
      for (auto& c : r) c = -c;
    make_primitive(r);
    chain_.push_back(std::move(r));
  }
}

int SturmChain::variations(const Rat& x) const {
  int count = 0;
  int last = 0;
  for (const auto& p : chain_) {
    int s = sign_at(p, x);
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

int SturmChain::variations_at_infinity(bool positive) const {
  int count = 0;
  int last = 0;
  for (const auto& p : chain_) {
    int s = sgn(p.back());
    if (!positive && degree(p) % 2 == 1) s = -s;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

Rat root_bound(const ZPoly& z) {
  if (degree(z) < 1) return Rat(1);
  BigInt lead = abs(z.back());
  BigInt mx = 0;
  for (std::size_t i = 0; i + 1 < z.size(); ++i)
    if (abs(z[i]) > mx) mx = abs(z[i]);
  // 1 + mx/lead < 2^k
  BigInt ceil_q = (mx + lead - 1) / lead + 1;
  Rat b(1);
  mpz_mul_2exp(b.get_num_mpz_t(), b.get_num_mpz_t(), mpz_sizeinbase(ceil_q.get_mpz_t(), 2));
  return b;
}

int descartes_variations(const ZPoly& z) {
  int count = 0;
  int last = 0;
  for (const auto& c : z) {
    int s = sgn(c);
    if (s == 0) continue;
    if (last != 0 && s != last) ++count;
    last = s;
  }
  return count;
}

int descartes_bound_zero_to(const ZPoly& z, const Rat& c) {
  const int d = degree(z);
  if (d < 1) return 0;
  // (1+y)^d z(c/(1+y)): scale by c, reverse, shift by 1.
  const BigInt& u = c.get_num();
  const BigInt& v = c.get_den();
  ZPoly t(z.size());
  BigInt upow = 1;
  std::vector<BigInt> vpow(static_cast<std::size_t>(d) + 1);
  vpow[0] = 1;
  for (int i = 1; i <= d; ++i) vpow[static_cast<std::size_t>(i)] = vpow[static_cast<std::size_t>(i - 1)] * v;
  for (int i = 0; i <= d; ++i) {
    t[static_cast<std::size_t>(d - i)] = z[static_cast<std::size_t>(i)] * upow * vpow[static_cast<std::size_t>(d - i)];
    upow *= u;
  }
  const std::size_t n = t.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j > i; --j) t[j - 1] += t[j];
  return descartes_variations(t);
}

std::vector<RootInterval> isolate_real_roots(const RatPoly& q, const Range& range) {
  if (q.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "cannot isolate roots of the zero polynomial");
  return isolate_real_roots(primitive_part(q), range);
}

std::vector<RootInterval> isolate_real_roots(const ZPoly& q, const Range& range) {
  if (q.empty()) throw Error(ErrorKind::ZeroPolynomial, "cannot isolate roots of the zero polynomial");
  std::vector<RootInterval> out;
  if (degree(q) < 1) return out;
  const ZPoly sf = squarefree_primitive(q);
  const SturmChain chain(sf);
  const Rat bound = root_bound(sf);
  Rat a = range.lo ? *range.lo : Rat(-bound);
  Rat b = range.hi ? *range.hi : bound;
  if (range.lo && range.hi && !(a < b)) return out;
  if (!range.hi && b <= a) return out;
  if (!range.lo && a >= b) return out;

  struct Piece {
    Rat a, b;
    int count;
  };
  // Depth-first, left piece first, so roots come out ascending.
  std::vector<Piece> stack{{a, b, chain.count(a, b)}};
  while (!stack.empty()) {
    Piece pc = std::move(stack.back());
    stack.pop_back();
    if (pc.count == 0) continue;
    if (pc.count == 1) {
      if (sign_at(sf, pc.b) == 0) {
        out.push_back({pc.b, pc.b});
        continue;
      }
      if (sign_at(sf, pc.a) != 0) {
        out.push_back({pc.a, pc.b});
        continue;
      }
    }
    Rat m = (pc.a + pc.b) / 2;
    int left = chain.count(pc.a, m);
    stack.push_back({m, pc.b, pc.count - left});
    stack.push_back({pc.a, m, left});
  }
  if (range.hi)
    std::erase_if(out, [&](const RootInterval& iv) { return iv.exact() && iv.lo == *range.hi; });
  // Neighbouring pieces may share a (non-root) endpoint; shrink until disjoint.
  for (std::size_t i = 1; i < out.size(); ++i) {
    while (out[i - 1].hi >= out[i].lo) {
      out[i - 1] = refine(sf, out[i - 1], out[i - 1].width() / 2);
      out[i] = refine(sf, out[i], out[i].width() / 2);
    }
  }
  return out;
}

RootInterval refine(const ZPoly& squarefree, RootInterval iv, const Rat& tol) {
  if (iv.exact()) return iv;
  const int sa = sign_at(squarefree, iv.lo);
  while (iv.width() > tol) {
    Rat m = iv.midpoint();
    int sm = sign_at(squarefree, m);
    if (sm == 0) return {m, m};
    if (sm == sa)
      iv.lo = std::move(m);
    else
      iv.hi = std::move(m);
  }
  return iv;
}

std::optional<NonpositivityPoint> smallest_nonpositivity_point(const RatPoly& q, const Rat& tol) {
  if (q.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "every p is a nonpositivity point of 0");
  return smallest_nonpositivity_point(primitive_part(q), tol);
}

std::optional<NonpositivityPoint> smallest_nonpositivity_point(const ZPoly& q, const Rat& tol,
                                                               const std::optional<Rat>& cut) {
  if (q.empty()) throw Error(ErrorKind::ZeroPolynomial, "every p is a nonpositivity point of 0");
  if (sgn(q.front()) <= 0) return NonpositivityPoint{{Rat(0), Rat(0)}, true};
  if (degree(q) < 1) return std::nullopt;
  if (descartes_variations(q) == 0) return std::nullopt;
  if (cut && descartes_bound_zero_to(q, *cut) == 0 && sign_at(q, *cut) != 0) return std::nullopt;

  const ZPoly sf = squarefree_primitive(q);
  const SturmChain chain(sf);
  Rat a = 0;
  Rat b = cut ? *cut : root_bound(sf);
  int count = chain.count(a, b);
  if (count == 0) return std::nullopt;
  while (true) {
    if (count == 1) {
      if (sign_at(sf, b) == 0) return NonpositivityPoint{{b, b}, false};
      return NonpositivityPoint{refine(sf, {a, b}, tol), false};
    }
    Rat m = (a + b) / 2;
    int left = chain.count(a, m);
    if (left >= 1) {
      b = std::move(m);
      count = left;
    } else {
      a = std::move(m);
      count -= left;
    }
  }
}

int compare_roots(const ZPoly& a, RootInterval ia, const ZPoly& b, RootInterval ib) {
  const ZPoly sa = squarefree_primitive(a);
  const ZPoly sb = squarefree_primitive(b);
  std::optional<ZPoly> common;
  while (true) {
    if (ia.hi < ib.lo) return -1;
    if (ib.hi < ia.lo) return 1;
    if (ia.exact() && ib.exact()) return 0;
    if (ia.exact() && sign_at(sb, ia.lo) == 0) return 0;
    if (ib.exact() && sign_at(sa, ib.lo) == 0) return 0;
    if (!ia.exact() && !ib.exact()) {
      if (!common) common = primitive_part(gcd(to_rat_poly(sa), to_rat_poly(sb)));
      if (degree(*common) >= 1) {
        Rat lo = std::max(ia.lo, ib.lo), hi = std::min(ia.hi, ib.hi);
        bool root_inside = sign_at(*common, lo) == 0 || SturmChain(*common).count(lo, hi) > 0;
        if (root_inside) return 0;
      }
    }
    if (!ia.exact()) ia = refine(sa, ia, ia.width() / 2);
    if (!ib.exact()) ib = refine(sb, ib, ib.width() / 2);
  }
}

}  // namespace poslab
