#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace almostuniv {

enum class ErrorCode {
  InvalidArgument,
  NotPositiveDefinite,
  NonIntegralValues,
  ZeroInput,
  DegenerateForm,
  PrecisionTooLow,
  ShapeViolation,
  NotUniversalAt2,
  BudgetExceeded,
  Overflow,
  InternalAssertion,
  ParseError,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace almostuniv
