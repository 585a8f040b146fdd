#include "stringchain/error.hpp"

namespace stringchain {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveDensity: return "NonPositiveDensity";
    case ErrorCode::EmptyChain: return "EmptyChain";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::EmptyScan: return "EmptyScan";
    case ErrorCode::NonPositiveBeta: return "NonPositiveBeta";
    case ErrorCode::SingularBoundaryMatrix: return "SingularBoundaryMatrix";
    case ErrorCode::QuadratureTooCoarse: return "QuadratureTooCoarse";
    case ErrorCode::ZeroBeta: return "ZeroBeta";
    case ErrorCode::SingularDenominator: return "SingularDenominator";
    case ErrorCode::SignConventionMismatch: return "SignConventionMismatch";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::CflViolation: return "CflViolation";
    case ErrorCode::LinearSolveFailure: return "LinearSolveFailure";
    case ErrorCode::InsufficientDecay: return "InsufficientDecay";
    case ErrorCode::TooCoarse: return "TooCoarse";
    case ErrorCode::SingularShift: return "SingularShift";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

}  // namespace stringchain
