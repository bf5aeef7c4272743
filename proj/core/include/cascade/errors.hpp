#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cascade {

enum class ErrorCode {
  NotSchur,
  Singular,
  NegativeEntry,
  IndexOutOfRange,
  LengthMismatch,
  ValidationFailure,
  TooLarge,
  InconsistentEquilibrium,
  NonMonotoneTrace,
  MonotoneViolation,
  ParseError,
  IoFailure,
};

std::string_view to_string(ErrorCode code);

/// Base for every error raised by the library. Callers dispatch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct Violation {
  std::string field;
  std::string message;
};

class ValidationFailure : public Error {
 public:
  explicit ValidationFailure(std::vector<Violation> violations);
  ValidationFailure(std::string field, std::string message);
  const std::vector<Violation>& violations() const noexcept { return violations_; }

 private:
  std::vector<Violation> violations_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::string field, const std::string& message);
  std::size_t line() const noexcept { return line_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::size_t line_;
  std::string field_;
};

}  // namespace cascade
