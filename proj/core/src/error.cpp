#include "nonlocal/error.hpp"

namespace nonlocal {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidParameter: return "invalid-parameter";
    case ErrorKind::kConstructionFailure: return "construction-failure";
    case ErrorKind::kPositivityViolation: return "positivity-violation";
    case ErrorKind::kTruncation: return "truncation-error";
    case ErrorKind::kDomainTooSmall: return "domain-too-small";
    case ErrorKind::kRescaleFailure: return "rescale-failure";
    case ErrorKind::kRecurrentResolvent: return "recurrent-resolvent";
    case ErrorKind::kInsufficientTerms: return "insufficient-n-max";
    case ErrorKind::kResolution: return "resolution-error";
    case ErrorKind::kIterationLimit: return "iteration-limit";
    case ErrorKind::kTiltOutOfRange: return "tilt-out-of-range";
    case ErrorKind::kHullViolation: return "hull-violation";
    case ErrorKind::kSolverFailure: return "solver-failure";
    case ErrorKind::kWindowTooShort: return "window-too-short";
    case ErrorKind::kDomainExhausted: return "domain-exhausted";
    case ErrorKind::kContractionViolated: return "contraction-violated";
    case ErrorKind::kNumericalPositivity: return "numerical-positivity";
    case ErrorKind::kConfig: return "config-error";
    case ErrorKind::kDependencyMissing: return "dependency-missing";
  }
  return "unknown-error";
}

}  // namespace nonlocal
