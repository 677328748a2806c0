#include "poslab/expr.hpp"

#include <cctype>
#include <limits>
#include <sstream>

#include "poslab/error.hpp"

namespace poslab {

ExprPtr Expr::number(Rat v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Number;
  e->value = std::move(v);
  return e;
}

ExprPtr Expr::variable(std::size_t index) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Variable;
  e->var = index;
  return e;
}

ExprPtr Expr::param() {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Param;
  return e;
}

ExprPtr Expr::unary(Kind k, ExprPtr operand) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->lhs = std::move(operand);
  return e;
}

ExprPtr Expr::binary(Kind k, ExprPtr l, ExprPtr r) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->lhs = std::move(l);
  e->rhs = std::move(r);
  return e;
}

ExprPtr Expr::power(ExprPtr base, unsigned exp) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Pow;
  e->lhs = std::move(base);
  e->exponent = exp;
  return e;
}

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
 public:
  Parser(std::string_view text, const std::vector<std::string>& vars) : text_(text), vars_(vars) {}

  ExprPtr run() {
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw SyntaxError(ErrorKind::Syntax, msg, pos_); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  std::string digits() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    return std::string(text_.substr(start, pos_ - start));
  }

  ExprPtr expr() {
    ExprPtr e = term();
    while (true) {
      char c = peek();
      if (c != '+' && c != '-') return e;
      ++pos_;
      e = Expr::binary(c == '+' ? Expr::Kind::Add : Expr::Kind::Sub, e, term());
    }
  }

  ExprPtr term() {
    ExprPtr e = factor();
    while (true) {
      char c = peek();
      if (c != '*' && c != '/') return e;
      ++pos_;
      e = Expr::binary(c == '*' ? Expr::Kind::Mul : Expr::Kind::Div, e, factor());
    }
  }

  ExprPtr factor() {
    ExprPtr b = base();
    if (peek() == '^') {
      ++pos_;
      std::size_t at = pos_;
      std::string d = digits();
      BigInt e(d, 10);
      if (e > std::numeric_limits<unsigned>::max()) throw SyntaxError(ErrorKind::Syntax, "exponent too large", at);
      return Expr::power(b, static_cast<unsigned>(e.get_ui()));
    }
    return b;
  }

  ExprPtr base() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return e;
    }
    if (c == '-') {
      ++pos_;
      return Expr::unary(Expr::Kind::Neg, base());
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      BigInt num(digits(), 10);
      // Greedy literal: "int / posint" with no operator in between.
      std::size_t save = pos_;
      if (peek() == '/') {
        ++pos_;
        skip_ws();
        if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          std::size_t at = pos_;
          BigInt den(digits(), 10);
          if (den == 0) throw SyntaxError(ErrorKind::Syntax, "zero denominator in literal", at);
          Rat r(num, den);
          r.canonicalize();
          return Expr::number(r);
        }
        pos_ = save;
      }
      return Expr::number(Rat(num));
    }
    if (is_ident_start(c)) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      if (name == "p") return Expr::param();
      for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) return Expr::variable(i);
      throw SyntaxError(ErrorKind::UnknownIdentifier, "unknown identifier '" + name + "'", start);
    }
    if (c == '\0') fail("unexpected end of input");
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;
};

// Precedence levels: 1 sum, 2 product, 3 power/unary, 4 atom.
int level(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div: return 2;
    case Expr::Kind::Pow:
    case Expr::Kind::Neg: return 3;
    case Expr::Kind::Number: return (e.value.get_den() == 1 && e.value >= 0) ? 4 : 3;
    default: return 4;
  }
}

void emit(std::ostream& os, const Expr& e, const std::vector<std::string>& vars);

void emit_wrapped(std::ostream& os, const Expr& e, const std::vector<std::string>& vars, bool wrap) {
  if (wrap) os << '(';
  emit(os, e, vars);
  if (wrap) os << ')';
}

void emit(std::ostream& os, const Expr& e, const std::vector<std::string>& vars) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::Number:
      if (e.value.get_den() == 1 && e.value >= 0)
        os << e.value.get_num().get_str();
      else
        os << '(' << e.value.get_str() << ')';
      return;
    case K::Variable: os << vars.at(e.var); return;
    case K::Param: os << 'p'; return;
    case K::Neg:
      os << '-';
      emit_wrapped(os, *e.lhs, vars, level(*e.lhs) < 4);
      return;
    case K::Pow:
      emit_wrapped(os, *e.lhs, vars, level(*e.lhs) < 4);
      os << '^' << e.exponent;
      return;
    case K::Add:
    case K::Sub:
      emit(os, *e.lhs, vars);
      os << (e.kind == K::Add ? '+' : '-');
      emit_wrapped(os, *e.rhs, vars, level(*e.rhs) <= 1);
      return;
    case K::Mul:
    case K::Div:
      // A divisor is always a bracketed or non-numeric factor, so no "/int"
      // can fuse into a greedy literal on reparse.
      emit_wrapped(os, *e.lhs, vars, level(*e.lhs) <= 1);
      os << (e.kind == K::Mul ? '*' : '/');
      emit_wrapped(os, *e.rhs, vars,
                   e.kind == K::Div ? (level(*e.rhs) < 4 || e.rhs->kind == K::Number) : level(*e.rhs) <= 2);
      return;
  }
}

}  // namespace

ExprPtr parse(std::string_view text, const std::vector<std::string>& vars) { return Parser(text, vars).run(); }

std::string print(const ExprPtr& e, const std::vector<std::string>& vars) {
  std::ostringstream os;
  emit(os, *e, vars);
  return os.str();
}

std::vector<std::string> parse_var_list(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    std::string name(text.substr(start, comma - start));
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.back()))) name.pop_back();
    while (!name.empty() && std::isspace(static_cast<unsigned char>(name.front()))) name.erase(0, 1);
    if (name.empty() || !is_ident_start(name[0]))
      throw SyntaxError(ErrorKind::Syntax, "bad variable name '" + name + "'", start);
    for (char c : name)
      if (!is_ident_char(c)) throw SyntaxError(ErrorKind::Syntax, "bad variable name '" + name + "'", start);
    if (name == "p") throw SyntaxError(ErrorKind::InvalidArgument, "'p' is reserved for the parameter", start);
    for (const auto& v : out)
      if (v == name) throw SyntaxError(ErrorKind::InvalidArgument, "duplicate variable '" + name + "'", start);
    out.push_back(name);
    start = comma + 1;
  }
  return out;
}

}  // namespace poslab
