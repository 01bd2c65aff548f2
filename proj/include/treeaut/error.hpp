#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace treeaut {

enum class ErrorKind {
  MalformedCycle,
  OutOfRange,
  RepeatedEntry,
  DegreeMismatch,
  SizeLimitExceeded,
  ConflictingConstraints,
  TrivialGroup,
  MalformedVertex,
  NotGeodesic,
  InconsistentPortrait,
  RadiusExhausted,
  IncompatibleSigma,
  OrbitViolation,
  LengthMismatch,
  NotTwoTransitive,
  ConstraintUnsolvable,
  NotStabilizing,
  SearchExhausted,
  HypothesisUnverified,
  InvalidContext,
  MalformedJson,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::MalformedCycle: return "MalformedCycle";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::RepeatedEntry: return "RepeatedEntry";
    case ErrorKind::DegreeMismatch: return "DegreeMismatch";
    case ErrorKind::SizeLimitExceeded: return "SizeLimitExceeded";
    case ErrorKind::ConflictingConstraints: return "ConflictingConstraints";
    case ErrorKind::TrivialGroup: return "TrivialGroup";
    case ErrorKind::MalformedVertex: return "MalformedVertex";
    case ErrorKind::NotGeodesic: return "NotGeodesic";
    case ErrorKind::InconsistentPortrait: return "InconsistentPortrait";
    case ErrorKind::RadiusExhausted: return "RadiusExhausted";
    case ErrorKind::IncompatibleSigma: return "IncompatibleSigma";
    case ErrorKind::OrbitViolation: return "OrbitViolation";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NotTwoTransitive: return "NotTwoTransitive";
    case ErrorKind::ConstraintUnsolvable: return "ConstraintUnsolvable";
    case ErrorKind::NotStabilizing: return "NotStabilizing";
    case ErrorKind::SearchExhausted: return "SearchExhausted";
    case ErrorKind::HypothesisUnverified: return "HypothesisUnverified";
    case ErrorKind::InvalidContext: return "InvalidContext";
    case ErrorKind::MalformedJson: return "MalformedJson";
  }
  return "Unknown";
}

/// Every failure in the library is reported through this type; `kind()`
/// identifies the contract that was violated.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace treeaut
