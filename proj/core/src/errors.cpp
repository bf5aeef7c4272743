#include "cascade/errors.hpp"

namespace cascade {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotSchur: return "NotSchur";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::ValidationFailure: return "ValidationFailure";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InconsistentEquilibrium: return "InconsistentEquilibrium";
    case ErrorCode::NonMonotoneTrace: return "NonMonotoneTrace";
    case ErrorCode::MonotoneViolation: return "MonotoneViolation";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoFailure: return "IoFailure";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

namespace {

std::string join_violations(const std::vector<Violation>& violations) {
  std::string out = std::to_string(violations.size()) + " violation(s)";
  for (const auto& v : violations) {
    out += "\n  ";
    out += v.field;
    out += ": ";
    out += v.message;
  }
  return out;
}

}  // namespace

ValidationFailure::ValidationFailure(std::vector<Violation> violations)
    : Error(ErrorCode::ValidationFailure, join_violations(violations)),
      violations_(std::move(violations)) {}

ValidationFailure::ValidationFailure(std::string field, std::string message)
    : ValidationFailure(std::vector<Violation>{{std::move(field), std::move(message)}}) {}

ParseError::ParseError(std::size_t line, std::string field, const std::string& message)
    : Error(ErrorCode::ParseError,
            "line " + std::to_string(line) + (field.empty() ? "" : " (" + field + ")") + ": " +
                message),
      line_(line),
      field_(std::move(field)) {}

}  // namespace cascade
