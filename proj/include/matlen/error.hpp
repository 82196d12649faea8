#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace matlen {

enum class ErrorCode {
  DimensionMismatch,
  FieldMismatch,
  Singular,
  NotPrime,
  ModulusTooLarge,
  NotSplit,
  CharPolyNotSplit,
  EmptySet,
  BudgetExceeded,
  InvalidArgument,
  SizeMismatch,
  FamilyHypothesisViolated,
  GenerationRetriesExhausted,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::DimensionMismatch: return "DimensionMismatch";
  case ErrorCode::FieldMismatch: return "FieldMismatch";
  case ErrorCode::Singular: return "Singular";
  case ErrorCode::NotPrime: return "NotPrime";
  case ErrorCode::ModulusTooLarge: return "ModulusTooLarge";
  case ErrorCode::NotSplit: return "NotSplit";
  case ErrorCode::CharPolyNotSplit: return "CharPolyNotSplit";
  case ErrorCode::EmptySet: return "EmptySet";
  case ErrorCode::BudgetExceeded: return "BudgetExceeded";
  case ErrorCode::InvalidArgument: return "InvalidArgument";
  case ErrorCode::SizeMismatch: return "SizeMismatch";
  case ErrorCode::FamilyHypothesisViolated: return "FamilyHypothesisViolated";
  case ErrorCode::GenerationRetriesExhausted: return "GenerationRetriesExhausted";
  case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace matlen
