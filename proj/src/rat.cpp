#include "poslab/rat.hpp"

#include <cctype>
#include <cmath>

#include "poslab/error.hpp"

namespace poslab {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::DivisionByZeroPolynomial: return "DivisionByZeroPolynomial";
    case ErrorKind::NonExpandable: return "NonExpandable";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorKind::IncompatibleModes: return "IncompatibleModes";
    case ErrorKind::InsufficientData: return "InsufficientData";
    case ErrorKind::DegenerateLeading: return "DegenerateLeading";
    case ErrorKind::GrowthMismatch: return "GrowthMismatch";
    case ErrorKind::NotPolynomial: return "NotPolynomial";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SingularRecurrence: return "SingularRecurrence";
  }
  return "Error";
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rat parse_rat(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  auto slash = s.find('/');
  std::string_view num = s.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1") : s.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw Error(ErrorKind::InvalidArgument, "not a rational: '" + std::string(text) + "'");
  BigInt d(std::string(den), 10);
  if (d == 0) throw Error(ErrorKind::InvalidArgument, "zero denominator in '" + std::string(text) + "'");
  Rat r(BigInt(std::string(num), 10), d);
  r.canonicalize();
  return negative ? Rat(-r) : r;
}

std::string to_string(const Rat& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string to_decimal(const Rat& r, int digits) {
  mpf_class f(r, static_cast<mp_bitcnt_t>(digits * 3.33) + 64);
  mp_exp_t exp = 0;
  std::string mant = f.get_str(exp, 10, static_cast<std::size_t>(digits));
  if (mant.empty() || mant == "0") return "0";
  bool neg = mant.front() == '-';
  if (neg) mant.erase(0, 1);
  std::string out;
  if (exp <= 0) {
    out = "0." + std::string(static_cast<std::size_t>(-exp), '0') + mant;
  } else if (static_cast<std::size_t>(exp) >= mant.size()) {
    out = mant + std::string(static_cast<std::size_t>(exp) - mant.size(), '0');
  } else {
    out = mant.substr(0, static_cast<std::size_t>(exp)) + "." + mant.substr(static_cast<std::size_t>(exp));
  }
  return neg ? "-" + out : out;
}

double to_double(const Rat& r) { return r.get_d(); }

BigInt floor_rat(const Rat& r) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

}  // namespace poslab
