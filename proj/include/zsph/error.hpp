#pragma once

#include <stdexcept>
#include <string>

namespace zsph {

enum class ErrorKind {
  invalid_resolution,
  truncation_overflow,
  zero_mean_violation,
  corrupt_cache,
  resolution_mismatch,
  shape,
  internal_consistency,
  invalid_step,
  step_failure,
  aggregation,
  ensemble,
  config,
  io,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised when the implicit midpoint solve fails; carries the last
/// fixed-point residual so callers can retry with a smaller step.
class StepFailure : public Error {
 public:
  StepFailure(const std::string& what, double residual)
      : Error(ErrorKind::step_failure, what), residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace zsph
