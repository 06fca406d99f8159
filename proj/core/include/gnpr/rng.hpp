#pragma once

#include <cstdint>
#include <random>

namespace gnpr {

/// Seedable generator with a fully specified draw sequence: mt19937_64 output
/// mapped to doubles by hand, so streams do not depend on the standard
/// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound) by rejection, bound > 0.
  std::uint64_t below(std::uint64_t bound);

  /// Standard normal via the cosine branch of Box-Muller (two uniforms per draw).
  double normal();

 private:
  std::mt19937_64 engine_;
};

}  // namespace gnpr
