#pragma once

#include <stdexcept>
#include <string>

namespace telegate {

enum class ErrorKind {
  Capacity,
  InvalidArgument,
  IndexOutOfRange,
  SizeMismatch,
  Precondition,
  ImpossibleBranch,
  Factorization,
  Validation,
  Locality,
  UnresolvedCondition,
  LimitExceeded,
  Scenario,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::IndexOutOfRange: return "index-out-of-range";
    case ErrorKind::SizeMismatch: return "size-mismatch";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::ImpossibleBranch: return "impossible-branch";
    case ErrorKind::Factorization: return "factorization";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Locality: return "locality";
    case ErrorKind::UnresolvedCondition: return "unresolved-condition";
    case ErrorKind::LimitExceeded: return "limit-exceeded";
    case ErrorKind::Scenario: return "scenario";
  }
  return "unknown";
}

// All library failures are reported through this type; kind() lets callers
// (and tests) distinguish the failure class without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace telegate
