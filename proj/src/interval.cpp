#include "poslab/interval.hpp"

#include <limits>
#include <vector>

#include "poslab/error.hpp"

namespace poslab {

IntervalScalar::IntervalScalar(mpfr_prec_t precision) : prec_(precision) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

IntervalScalar::IntervalScalar(const Rat& value, mpfr_prec_t precision) : IntervalScalar(precision) {
  mpfr_set_q(lo_, value.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, value.get_mpq_t(), MPFR_RNDU);
}

IntervalScalar::IntervalScalar(const Rat& lo, const Rat& hi, mpfr_prec_t precision) : IntervalScalar(precision) {
  if (hi < lo) throw Error(ErrorKind::InvalidArgument, "interval with hi < lo");
  mpfr_set_q(lo_, lo.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, hi.get_mpq_t(), MPFR_RNDU);
}

IntervalScalar::IntervalScalar(const IntervalScalar& other) : prec_(other.prec_) {
  mpfr_init2(lo_, prec_);
  mpfr_init2(hi_, prec_);
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

IntervalScalar::IntervalScalar(IntervalScalar&& other) noexcept : prec_(other.prec_) {
  // Steal the limb storage; leave `other` as a valid empty shell.
  *lo_ = *other.lo_;
  *hi_ = *other.hi_;
  other.live_ = false;
}

IntervalScalar& IntervalScalar::operator=(const IntervalScalar& other) {
  if (this == &other) return *this;
  if (!live_) {
    mpfr_init2(lo_, other.prec_);
    mpfr_init2(hi_, other.prec_);
    live_ = true;
  } else if (prec_ != other.prec_) {
    mpfr_set_prec(lo_, other.prec_);
    mpfr_set_prec(hi_, other.prec_);
  }
  prec_ = other.prec_;
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
  return *this;
}

IntervalScalar& IntervalScalar::operator=(IntervalScalar&& other) noexcept {
  if (this == &other) return *this;
  if (!other.live_) {
    // Moved-from source: copy nothing meaningful, just become a zero interval.
    if (live_) {
      mpfr_set_zero(lo_, 1);
      mpfr_set_zero(hi_, 1);
    }
    return *this;
  }
  if (live_) {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
  }
  prec_ = other.prec_;
  *lo_ = *other.lo_;
  *hi_ = *other.hi_;
  live_ = true;
  other.live_ = false;
  return *this;
}

IntervalScalar::~IntervalScalar() {
  if (live_) {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
  }
}

bool IntervalScalar::contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }

bool IntervalScalar::contains(const Rat& x) const {
  return mpfr_cmp_q(lo_, x.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, x.get_mpq_t()) >= 0;
}

bool IntervalScalar::contains(const IntervalScalar& other) const {
  return mpfr_lessequal_p(lo_, other.lo_) && mpfr_greaterequal_p(hi_, other.hi_);
}

double IntervalScalar::relative_width() const {
  if (contains_zero()) return std::numeric_limits<double>::infinity();
  mpfr_t w, m;
  mpfr_init2(w, 64);
  mpfr_init2(m, 64);
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  if (mpfr_sgn(lo_) > 0)
    mpfr_set(m, lo_, MPFR_RNDD);
  else
    mpfr_neg(m, hi_, MPFR_RNDD);
  mpfr_div(w, w, m, MPFR_RNDU);
  double r = mpfr_get_d(w, MPFR_RNDU);
  mpfr_clear(w);
  mpfr_clear(m);
  return r;
}

IntervalScalar& IntervalScalar::operator+=(const IntervalScalar& o) {
  mpfr_add(lo_, lo_, o.lo_, MPFR_RNDD);
  mpfr_add(hi_, hi_, o.hi_, MPFR_RNDU);
  return *this;
}

IntervalScalar& IntervalScalar::operator-=(const IntervalScalar& o) {
  // lo - o.hi may alias when &o == this; go through temporaries in that case.
  if (&o == this) {
    IntervalScalar copy(o);
    return *this -= copy;
  }
  mpfr_sub(lo_, lo_, o.hi_, MPFR_RNDD);
  mpfr_sub(hi_, hi_, o.lo_, MPFR_RNDU);
  return *this;
}

namespace {

// out = a * b, outward rounded; out must not alias a or b.
void mul_into(IntervalScalar& out, const IntervalScalar& a, const IntervalScalar& b, IntervalScalar& tmp) {
  mpfr_srcptr al = a.lo(), ah = a.hi(), bl = b.lo(), bh = b.hi();
  const int sal = mpfr_sgn(al), sah = mpfr_sgn(ah), sbl = mpfr_sgn(bl), sbh = mpfr_sgn(bh);
  auto set = [&](mpfr_srcptr x1, mpfr_srcptr y1, mpfr_srcptr x2, mpfr_srcptr y2) {
    mpfr_mul(out.lo(), x1, y1, MPFR_RNDD);
    mpfr_mul(out.hi(), x2, y2, MPFR_RNDU);
  };
  if (sal >= 0) {
    if (sbl >= 0)
      set(al, bl, ah, bh);
    else if (sbh <= 0)
      set(ah, bl, al, bh);
    else
      set(ah, bl, ah, bh);
  } else if (sah <= 0) {
    if (sbl >= 0)
      set(al, bh, ah, bl);
    else if (sbh <= 0)
      set(ah, bh, al, bl);
    else
      set(al, bh, al, bl);
  } else {
    if (sbl >= 0)
      set(al, bh, ah, bh);
    else if (sbh <= 0)
      set(ah, bl, al, bl);
    else {
      mpfr_mul(out.lo(), al, bh, MPFR_RNDD);
      mpfr_mul(tmp.lo(), ah, bl, MPFR_RNDD);
      mpfr_min(out.lo(), out.lo(), tmp.lo(), MPFR_RNDD);
      mpfr_mul(out.hi(), al, bl, MPFR_RNDU);
      mpfr_mul(tmp.hi(), ah, bh, MPFR_RNDU);
      mpfr_max(out.hi(), out.hi(), tmp.hi(), MPFR_RNDU);
    }
  }
}

}  // namespace

IntervalScalar& IntervalScalar::operator*=(const IntervalScalar& o) {
  IntervalScalar out(prec_), tmp(prec_);
  mul_into(out, *this, o, tmp);
  return *this = std::move(out);
}

IntervalScalar& IntervalScalar::operator/=(const IntervalScalar& o) {
  if (o.contains_zero()) throw Error(ErrorKind::DivisionByZeroPolynomial, "interval division by an interval containing 0");
  IntervalScalar inv(prec_);
  mpfr_ui_div(inv.lo_, 1, o.hi_, MPFR_RNDD);
  mpfr_ui_div(inv.hi_, 1, o.lo_, MPFR_RNDU);
  return *this *= inv;
}

void submul(IntervalScalar& acc, const IntervalScalar& a, const IntervalScalar& b, IntervalScalar scratch[2]) {
  mul_into(scratch[0], a, b, scratch[1]);
  mpfr_sub(acc.lo(), acc.lo(), scratch[0].hi(), MPFR_RNDD);
  mpfr_sub(acc.hi(), acc.hi(), scratch[0].lo(), MPFR_RNDU);
}

IntervalScalar interval_eval(const RatPoly& q, const IntervalScalar& x) {
  IntervalScalar acc(x.precision());
  for (int i = q.degree(); i >= 0; --i) {
    acc *= x;
    acc += IntervalScalar(q.coeff(static_cast<std::size_t>(i)), x.precision());
  }
  return acc;
}

std::string mpfr_to_string(mpfr_srcptr x, int digits, mpfr_rnd_t rnd) {
  if (mpfr_zero_p(x)) return "0";
  std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
  mpfr_snprintf(buf.data(), buf.size(), ("%." + std::to_string(digits) + "R*g").c_str(), rnd, x);
  return buf.data();
}

std::string IntervalScalar::lo_string(int digits) const { return mpfr_to_string(lo_, digits, MPFR_RNDD); }
std::string IntervalScalar::hi_string(int digits) const { return mpfr_to_string(hi_, digits, MPFR_RNDU); }

}  // namespace poslab
