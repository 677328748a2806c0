#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "poslab/rat.hpp"

namespace poslab {

/// Expression tree over rational literals, declared variables, the reserved
/// parameter `p`, + - * / and ^ with nonnegative integer exponents.
struct Expr {
  enum class Kind { Number, Variable, Param, Neg, Add, Sub, Mul, Div, Pow };

  Kind kind;
  Rat value;                 // Number
  std::size_t var = 0;       // Variable: index into the declared names
  unsigned exponent = 0;     // Pow
  std::shared_ptr<const Expr> lhs;
  std::shared_ptr<const Expr> rhs;

  static std::shared_ptr<const Expr> number(Rat v);
  static std::shared_ptr<const Expr> variable(std::size_t index);
  static std::shared_ptr<const Expr> param();
  static std::shared_ptr<const Expr> unary(Kind k, std::shared_ptr<const Expr> operand);
  static std::shared_ptr<const Expr> binary(Kind k, std::shared_ptr<const Expr> l, std::shared_ptr<const Expr> r);
  static std::shared_ptr<const Expr> power(std::shared_ptr<const Expr> base, unsigned e);
};

using ExprPtr = std::shared_ptr<const Expr>;

/// Recursive-descent parser for
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := base ('^' nonneg-int)?
///   base   := rational | name | '(' expr ')' | '-' base
///   rational := int ('/' posint)?
/// The literal rule is greedy: "x/2/3" is x/(2/3). Juxtaposition is not
/// multiplication. Throws SyntaxError (kind Syntax or UnknownIdentifier).
ExprPtr parse(std::string_view text, const std::vector<std::string>& vars);

/// Prints an expression that parses back to the same value.
std::string print(const ExprPtr& e, const std::vector<std::string>& vars);

/// Splits "x,y,z" into names, validating each as an identifier other than p.
std::vector<std::string> parse_var_list(std::string_view text);

}  // namespace poslab
