#pragma once

#include <stdexcept>
#include <string>

namespace poslab {

enum class ErrorKind {
  Syntax,
  UnknownIdentifier,
  DivisionByZeroPolynomial,
  NonExpandable,
  BudgetExceeded,
  ZeroPolynomial,
  IncompatibleModes,
  InsufficientData,
  DegenerateLeading,
  GrowthMismatch,
  NotPolynomial,
  InvalidArgument,
  SingularRecurrence,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` tells callers (and the
/// CLI exit-code mapping) what went wrong.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Parse failures carry the byte offset into the input text.
class SyntaxError : public Error {
 public:
  SyntaxError(ErrorKind kind, const std::string& what, std::size_t position)
      : Error(kind, what + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace poslab
