#pragma once

#include <stdexcept>
#include <string>

namespace indicial {

enum class ErrorCode {
  // validation
  ParseError,
  NotSymmetric,
  // numerical
  NotHermitian,
  DimensionMismatch,
  SingularConstantTerm,
  WindowTooSmall,
  InvariantMismatch,
  TruncationExhausted,
  AmbiguousWindow,
  GramDegenerate,
  CanonicalFormFailure,
  QuadratureNotConverged,
  // precondition
  NotStarPaired,
  NotCritical,
  SignConditionViolated,
  NotSemibounded,
  NoInvariantSelfadjointExtension,
  PreconditionViolated,
  NonIntegrable,
};

enum class ErrorCategory { Validation, Numerical, Precondition };

const char* error_name(ErrorCode code);
ErrorCategory error_category(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);
  ErrorCode code() const { return code_; }
  ErrorCategory category() const { return error_category(code_); }

 private:
  ErrorCode code_;
};

}  // namespace indicial
