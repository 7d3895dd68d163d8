#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace emap {

/// Deterministic random stream used by every seeded component. The engine is
/// std::mt19937_64 (bit-exact by the standard) and the scaling to doubles is
/// explicit, so a given seed reproduces the identical sequence everywhere.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1p-53;
  }

  /// Uniform in (0, 1].
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1p-53;
  }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; one fresh pair of uniforms per draw.
  double normal() {
    constexpr double kTwoPi = 6.283185307179586476925286766559;
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace emap
