#include "indicial/error.hpp"

namespace indicial {

const char* error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SingularConstantTerm: return "SingularConstantTerm";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::InvariantMismatch: return "InvariantMismatch";
    case ErrorCode::TruncationExhausted: return "TruncationExhausted";
    case ErrorCode::AmbiguousWindow: return "AmbiguousWindow";
    case ErrorCode::GramDegenerate: return "GramDegenerate";
    case ErrorCode::CanonicalFormFailure: return "CanonicalFormFailure";
    case ErrorCode::QuadratureNotConverged: return "QuadratureNotConverged";
    case ErrorCode::NotStarPaired: return "NotStarPaired";
    case ErrorCode::NotCritical: return "NotCritical";
    case ErrorCode::SignConditionViolated: return "SignConditionViolated";
    case ErrorCode::NotSemibounded: return "NotSemibounded";
    case ErrorCode::NoInvariantSelfadjointExtension: return "NoInvariantSelfadjointExtension";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::NonIntegrable: return "NonIntegrable";
  }
  return "Unknown";
}

ErrorCategory error_category(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::NotSymmetric:
      return ErrorCategory::Validation;
    case ErrorCode::NotStarPaired:
    case ErrorCode::NotCritical:
    case ErrorCode::SignConditionViolated:
    case ErrorCode::NotSemibounded:
    case ErrorCode::NoInvariantSelfadjointExtension:
    case ErrorCode::PreconditionViolated:
    case ErrorCode::NonIntegrable:
      return ErrorCategory::Precondition;
    default:
      return ErrorCategory::Numerical;
  }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

}  // namespace indicial
