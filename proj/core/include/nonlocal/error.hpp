#pragma once

#include <stdexcept>
#include <string>

namespace nonlocal {

enum class ErrorKind {
  kInvalidParameter,
  kConstructionFailure,
  kPositivityViolation,
  kTruncation,
  kDomainTooSmall,
  kRescaleFailure,
  kRecurrentResolvent,
  kInsufficientTerms,
  kResolution,
  kIterationLimit,
  kTiltOutOfRange,
  kHullViolation,
  kSolverFailure,
  kWindowTooShort,
  kDomainExhausted,
  kContractionViolated,
  kNumericalPositivity,
  kConfig,
  kDependencyMissing,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace nonlocal
