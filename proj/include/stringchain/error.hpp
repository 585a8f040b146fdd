#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace stringchain {

enum class ErrorCode {
  NonPositiveDensity,
  EmptyChain,
  GridMismatch,
  ArityMismatch,
  EmptyScan,
  NonPositiveBeta,
  SingularBoundaryMatrix,
  QuadratureTooCoarse,
  ZeroBeta,
  SingularDenominator,
  SignConventionMismatch,
  NoConvergence,
  DegenerateData,
  CflViolation,
  LinearSolveFailure,
  InsufficientDecay,
  TooCoarse,
  SingularShift,
  SingularSystem,
  InvalidArgument,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (tests, the CLI) can branch on the kind without parsing text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace stringchain
