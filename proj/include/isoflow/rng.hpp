#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace isoflow {

/// SplitMix64. Reproducible across languages: state += 0x9E3779B97F4A7C15,
/// then the standard xor-shift-multiply finalizer. uniform() uses the top
/// 53 bits.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

/// Random Volterra initial state for matrix size k: uniform on [-2, 2]^{k-1}.
/// For even k, draws within 1e-6 of a coordinate hyperplane are redrawn.
inline std::vector<double> random_volterra_state(SplitMix64& rng, std::size_t k) {
  std::vector<double> c(k - 1);
  for (double& x : c) {
    do {
      x = rng.uniform(-2.0, 2.0);
    } while (k % 2 == 0 && std::abs(x) < 1e-6);
  }
  return c;
}

}  // namespace isoflow
