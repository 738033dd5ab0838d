#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace schwarz {

enum class ErrorCode {
  kBaseMismatch,
  kDivisionByZero,
  kCriticalPoint,
  kNotNormal,
  kOrderTooSmall,
  kInvalidArgument,
  kPole,
  kHypothesisViolation,
  kCriticalOrbit,
  kEscapedInterval,
  kSamplingFailure,
  kMembershipFailure,
  kParse,
  kInternal,
};

/// Which branch of the normality case analysis a NotNormal failure fell into.
/// Only the exact backend can tell the first two apart.
enum class NormalityFailure {
  kNone,
  kDegenerate,    // approximant exists but has lower degree
  kNonexistent,   // no rational map of degree <= d matches to order 2d
  kUndetermined,  // float backend: singular within tolerance
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Error(ErrorCode code, const std::string& what, NormalityFailure kind,
        int level)
      : std::runtime_error(what), code_(code), normality_(kind), level_(level) {}

  ErrorCode code() const noexcept { return code_; }
  NormalityFailure normality() const noexcept { return normality_; }
  /// Order (or Pick level) at which the failure was detected; -1 if n/a.
  int level() const noexcept { return level_; }

 private:
  ErrorCode code_;
  NormalityFailure normality_ = NormalityFailure::kNone;
  int level_ = -1;
};

inline std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kBaseMismatch: return "BaseMismatch";
    case ErrorCode::kDivisionByZero: return "DivisionByZero";
    case ErrorCode::kCriticalPoint: return "CriticalPoint";
    case ErrorCode::kNotNormal: return "NotNormal";
    case ErrorCode::kOrderTooSmall: return "OrderTooSmall";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kPole: return "Pole";
    case ErrorCode::kHypothesisViolation: return "HypothesisViolation";
    case ErrorCode::kCriticalOrbit: return "CriticalOrbit";
    case ErrorCode::kEscapedInterval: return "EscapedInterval";
    case ErrorCode::kSamplingFailure: return "SamplingFailure";
    case ErrorCode::kMembershipFailure: return "MembershipFailure";
    case ErrorCode::kParse: return "Parse";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

inline std::string_view to_string(NormalityFailure kind) noexcept {
  switch (kind) {
    case NormalityFailure::kNone: return "none";
    case NormalityFailure::kDegenerate: return "degenerate";
    case NormalityFailure::kNonexistent: return "nonexistent";
    case NormalityFailure::kUndetermined: return "undetermined";
  }
  return "unknown";
}

}  // namespace schwarz
