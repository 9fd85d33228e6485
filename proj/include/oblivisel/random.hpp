#pragma once

#include <cstdint>
#include <limits>

namespace oblivisel {

/// Counter-based SplitMix64. Output i is mix(seed + (i + 1) * golden), so a
/// stream is fully determined by its seed and position.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += kGolden;
    return mix(state_);
  }

  /// Independent child stream; does not advance this generator.
  SplitMix64 split(std::uint64_t stream) const { return SplitMix64(mix(state_ ^ mix(stream + kGolden))); }

  /// Uniform value in [0, bound) by rejection; bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    // 2^64 mod bound, computed without overflow.
    const std::uint64_t reject = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = (*this)();
      if (x >= reject) return x % bound;
    }
  }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t state_;
};

}  // namespace oblivisel
