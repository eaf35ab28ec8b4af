#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace wbi::math {

inline constexpr double kPi = 3.14159265358979323846;

/// splitmix64 finalizer; decorrelates derived seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

/// Stream seed for (master seed, step label, shard index). All randomness in
/// the pipeline flows from a master seed through this derivation, so results
/// are independent of how work is sharded.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                                 std::uint64_t index = 0) {
  return splitmix64(master ^ fnv1a64(label) ^
                    (0x9E3779B97F4A7C15ULL * (index + 1)));
}

/// Deterministic random stream: mt19937_64 core with self-contained normal,
/// gamma and exponential transforms. The transforms are implemented here
/// rather than taken from <random> so that draws are reproducible across
/// standard library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t raw() { return gen_(); }

  /// Uniform on (0, 1].
  double uniform() {
    return static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Standard normal via Box-Muller (cosine branch; two uniforms per draw).
  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  double exponential() { return -std::log(uniform()); }

  /// Gamma(shape, 1) by Marsaglia-Tsang squeeze; shape < 1 boosted through
  /// the shape+1 power trick.
  double gamma(double shape) {
    if (shape < 1.0) {
      const double g = gamma(shape + 1.0);
      return g * std::pow(uniform(), 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x;
      double v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace wbi::math
