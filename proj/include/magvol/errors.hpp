#pragma once

#include <stdexcept>
#include <string>

namespace magvol {

enum class ErrorKind {
  InvalidArgument,
  NotPositiveDefinite,
  DegenerateBody,
  DimensionCap,
  TupleBudgetExceeded,
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::DegenerateBody: return "DegenerateBody";
    case ErrorKind::DimensionCap: return "DimensionCap";
    case ErrorKind::TupleBudgetExceeded: return "TupleBudgetExceeded";
  }
  return "Unknown";
}

class DomainError : public std::runtime_error {
 public:
  DomainError(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  const char* kind_name() const noexcept { return error_kind_name(kind_); }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw DomainError(kind, message);
}

inline void require(bool cond, ErrorKind kind, const std::string& message) {
  if (!cond) fail(kind, message);
}

}  // namespace magvol
