#include "zsph/error.hpp"

namespace zsph {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_resolution: return "invalid-resolution";
    case ErrorKind::truncation_overflow: return "truncation-overflow";
    case ErrorKind::zero_mean_violation: return "zero-mean-violation";
    case ErrorKind::corrupt_cache: return "corrupt-cache";
    case ErrorKind::resolution_mismatch: return "resolution-mismatch";
    case ErrorKind::shape: return "shape";
    case ErrorKind::internal_consistency: return "internal-consistency";
    case ErrorKind::invalid_step: return "invalid-step";
    case ErrorKind::step_failure: return "step-failure";
    case ErrorKind::aggregation: return "aggregation";
    case ErrorKind::ensemble: return "ensemble";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace zsph
