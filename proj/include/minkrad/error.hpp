#pragma once

#include <stdexcept>
#include <string>

namespace minkrad {

/// Failure categories surfaced by the library. The CLI maps them onto exit codes.
enum class ErrorKind {
  Domain,               // argument outside the mathematical domain
  InvalidInput,         // malformed configuration or precondition violation
  SlopeSaturation,      // |s| reached the φ singularity
  NoPositivityInterval, // weight has no region with a > 0
  MeanConditionViolated,
  WeightTooThin,        // no admissible trimming ε
  InconsistentEpsilon,
  UnboundedBranch,
  Io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

  /// True for failures that mean the problem violates a structural hypothesis.
  bool is_hypothesis_violation() const noexcept {
    return kind_ == ErrorKind::NoPositivityInterval || kind_ == ErrorKind::MeanConditionViolated ||
           kind_ == ErrorKind::WeightTooThin;
  }

 private:
  ErrorKind kind_;
};

}  // namespace minkrad
