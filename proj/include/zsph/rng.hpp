#pragma once

#include <cstdint>

namespace zsph {

std::uint64_t splitmix64(std::uint64_t x);

/// Counter-based generator: the n-th output is a pure function of
/// (seed, stream, substream, n), so draws never depend on scheduling.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream = 0);

  std::uint64_t next_u64();
  /// Uniform in the open interval (0, 1).
  double uniform();
  /// Standard normal by Box-Muller; each call consumes two counters.
  double normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace zsph
