#pragma once

#include <cstdint>
#include <random>

namespace sbmh {

/// SplitMix64 finalizer. Used to derive independent seeds from a base seed.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for replicate `replicate` of an experiment, attempt `attempt`
/// (attempts > 0 are resamples after a disconnected draw):
///   splitmix64(splitmix64(base + replicate) + attempt)
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t replicate,
                          std::uint64_t attempt = 0);

/// Portable random source. The engine is std::mt19937_64, whose output
/// sequence is fixed by the C++ standard; the conversions to doubles and
/// bounded integers are done here rather than with <random> distributions,
/// which are implementation-defined. Same seed, same stream, any platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// True with probability p; p <= 0 never fires, p >= 1 always does.
  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, n), n > 0, unbiased (rejection sampling).
  std::uint64_t below(std::uint64_t n);

 private:
  std::mt19937_64 engine_;
};

}  // namespace sbmh
