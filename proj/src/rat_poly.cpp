#include "poslab/rat_poly.hpp"

#include <sstream>

#include "poslab/error.hpp"

namespace poslab {

RatPoly::RatPoly(std::vector<Rat> coeffs) : coeffs_(std::move(coeffs)) {
  for (auto& c : coeffs_) c.canonicalize();
  trim();
}

RatPoly RatPoly::constant(const Rat& c) { return RatPoly(std::vector<Rat>{c}); }

RatPoly RatPoly::monomial(const Rat& c, std::size_t degree) {
  std::vector<Rat> v(degree + 1);
  v[degree] = c;
  return RatPoly(std::move(v));
}

void RatPoly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

const Rat& RatPoly::leading() const {
  if (coeffs_.empty()) throw Error(ErrorKind::ZeroPolynomial, "leading coefficient of zero polynomial");
  return coeffs_.back();
}

Rat RatPoly::operator()(const Rat& x) const {
  Rat acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

RatPoly& RatPoly::operator+=(const RatPoly& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size());
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  trim();
  return *this;
}

RatPoly& RatPoly::operator-=(const RatPoly& other) {
  if (other.coeffs_.size() > coeffs_.size()) coeffs_.resize(other.coeffs_.size());
  for (std::size_t i = 0; i < other.coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  trim();
  return *this;
}

RatPoly& RatPoly::operator*=(const RatPoly& other) {
  *this = *this * other;
  return *this;
}

RatPoly& RatPoly::operator*=(const Rat& scalar) {
  if (scalar == 0) {
    coeffs_.clear();
    return *this;
  }
  for (auto& c : coeffs_) c *= scalar;
  return *this;
}

RatPoly operator*(const RatPoly& a, const RatPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rat> out(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return RatPoly(std::move(out));
}

RatPoly operator-(RatPoly a) {
  for (auto& c : a.coeffs_) c = -c;
  return a;
}

std::string RatPoly::to_string(std::string_view var) const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const Rat& c = coeffs_[i];
    if (c == 0) continue;
    Rat mag = abs(c);
    if (c < 0)
      os << "-";
    else if (!first)
      os << "+";
    if (i == 0) {
      os << mag.get_str();
      first = false;
      continue;
    }
    // A leading "-p^2" would parse as (-p)^2.
    if (mag != 1 || (first && c < 0)) os << mag.get_str() << "*";
    first = false;
    os << var;
    if (i > 1) os << "^" << i;
  }
  return os.str();
}

RatPoly derivative(const RatPoly& q) {
  if (q.degree() < 1) return {};
  std::vector<Rat> d(q.coeffs().size() - 1);
  for (std::size_t i = 1; i < q.coeffs().size(); ++i) d[i - 1] = q.coeffs()[i] * static_cast<unsigned long>(i);
  return RatPoly(std::move(d));
}

RatPoly pow(const RatPoly& q, unsigned e) {
  RatPoly result = RatPoly::constant(1);
  RatPoly base = q;
  while (e) {
    if (e & 1u) result *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return result;
}

std::pair<RatPoly, RatPoly> divmod(const RatPoly& a, const RatPoly& b) {
  if (b.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "polynomial division by zero");
  std::vector<Rat> r = a.coeffs();
  if (a.degree() < b.degree()) return {RatPoly(), a};
  const int db = b.degree();
  std::vector<Rat> quot(static_cast<std::size_t>(a.degree() - db + 1));
  const Rat& lb = b.leading();
  for (int i = a.degree(); i >= db; --i) {
    if (r[i] == 0) continue;
    Rat f = r[i] / lb;
    quot[static_cast<std::size_t>(i - db)] = f;
    for (int j = 0; j <= db; ++j) r[static_cast<std::size_t>(i - db + j)] -= f * b.coeffs()[j];
  }
  return {RatPoly(std::move(quot)), RatPoly(std::move(r))};
}

RatPoly rem(const RatPoly& a, const RatPoly& b) { return divmod(a, b).second; }

RatPoly gcd(const RatPoly& a, const RatPoly& b) {
  RatPoly x = a, y = b;
  while (!y.is_zero()) {
    RatPoly r = rem(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  if (x.is_zero()) return x;
  Rat inv = 1 / x.leading();
  return x * inv;
}

RatPoly squarefree_part(const RatPoly& q) {
  if (q.degree() < 1) return q;
  RatPoly g = gcd(q, derivative(q));
  return divmod(q, g).first;
}

RatPoly taylor_shift(const RatPoly& q, const Rat& shift) {
  std::vector<Rat> c = q.coeffs();
  const std::size_t n = c.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j > i; --j) c[j - 1] += shift * c[j];
  return RatPoly(std::move(c));
}

RatPoly compose(const RatPoly& outer, const RatPoly& inner) {
  RatPoly acc;
  for (int i = outer.degree(); i >= 0; --i) {
    acc *= inner;
    acc += RatPoly::constant(outer.coeff(static_cast<std::size_t>(i)));
  }
  return acc;
}

int degree(const ZPoly& z) { return static_cast<int>(z.size()) - 1; }

void trim(ZPoly& z) {
  while (!z.empty() && z.back() == 0) z.pop_back();
}

ZPoly primitive_part(const RatPoly& q) {
  BigInt l = 1;
  for (const auto& c : q.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
  ZPoly z;
  z.reserve(q.coeffs().size());
  BigInt g = 0;
  for (const auto& c : q.coeffs()) {
    z.push_back(c.get_num() * (l / c.get_den()));
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), z.back().get_mpz_t());
  }
  if (g > 1)
    for (auto& c : z) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
  return z;
}

RatPoly to_rat_poly(const ZPoly& z) {
  std::vector<Rat> c(z.begin(), z.end());
  return RatPoly(std::move(c));
}

int sign_at(const ZPoly& z, const Rat& x) {
  // sum c_i a^i b^(d-i) has the sign of z(a/b) because b > 0.
  if (z.empty()) return 0;
  const BigInt& a = x.get_num();
  const BigInt& b = x.get_den();
  BigInt acc = z.back();
  BigInt bpow = 1;
  for (int i = degree(z) - 1; i >= 0; --i) {
    bpow *= b;
    acc *= a;
    acc += z[static_cast<std::size_t>(i)] * bpow;
  }
  return sgn(acc);
}

}  // namespace poslab
