#pragma once

// Counter-based splittable random streams. Every consumer derives an
// independent stream from (seed, index), so results never depend on
// scheduling or thread count.

#include <cstdint>

namespace sysrel {

/// SplitMix64 finalizer; also used as the stream-derivation hash.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in the open interval (0, 1).
  double u01() {
    return (static_cast<double>(next() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  }

 private:
  std::uint64_t state_;
};

/// Stream for logical index `idx` under `seed`; independent of call order.
inline SplitMix64 derived_stream(std::uint64_t seed, std::uint64_t idx) {
  return SplitMix64(mix64(mix64(seed) ^ mix64(idx ^ 0xA5A5A5A5A5A5A5A5ULL)));
}

}  // namespace sysrel
