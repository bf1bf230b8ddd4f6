#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

namespace shclust::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Derives an independent child seed from (seed, stream). Used everywhere a
/// sub-computation needs its own deterministic stream.
inline std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
  return mix64(seed + kGolden * (stream + 1));
}

inline std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return derive(derive(seed, a), b);
}

/// Small deterministic generator (splitmix64 stream). Cross-platform: all
/// distributions below are built from the raw 64-bit stream, no
/// implementation-defined std:: distributions involved.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += kGolden;
    return mix64(state_);
  }

  /// Uniform on [0, 1).
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1]; safe for log().
  double uniform01_open_low() {
    return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller (pair cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01_open_low();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  /// Uniform integer in [0, bound). bound > 0.
  std::uint64_t bounded(std::uint64_t bound) { return next() % bound; }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Counter-based cell draw: a standard normal determined by (seed, i, j)
/// alone, independent of evaluation order.
inline double normal_at(std::uint64_t seed, std::uint64_t i, std::uint64_t j) {
  SplitMix64 g(derive(seed, i, j));
  return g.normal();
}

/// Deterministic Fisher-Yates permutation of 0..n-1.
inline std::vector<int> permutation(int n, std::uint64_t seed) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  SplitMix64 g(seed);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(g.bounded(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

}  // namespace shclust::rng
