#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace qmoney {

/// Seeded random source used by every sampler in the project.
///
/// Streams are derived from a single root seed by hashing (root, stream id)
/// with SplitMix64, so trial t always sees the same bits regardless of how
/// trials are scheduled. All derived quantities (bits, bounded integers,
/// doubles) are computed here rather than through <random> distributions so
/// that outputs do not depend on the standard library implementation.
class Rng {
 public:
  using result_type = uint64_t;

  explicit Rng(uint64_t seed) : engine_(splitmix64(seed)) {}

  static Rng stream(uint64_t root_seed, uint64_t stream_id) {
    return Rng(splitmix64(root_seed) ^ splitmix64(stream_id + 0x9E3779B97F4A7C15ULL));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() { return engine_(); }

  bool bit() { return (engine_() >> 63) != 0; }

  /// Uniform integer in [0, bound). bound must be positive.
  uint64_t below(uint64_t bound) {
    uint64_t threshold = (0 - bound) % bound;
    while (true) {
      uint64_t r = engine_();
      if (r >= threshold) {
        return r % bound;
      }
    }
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  static constexpr uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace qmoney
