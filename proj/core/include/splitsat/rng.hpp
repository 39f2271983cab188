#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace splitsat {

/// splitmix64 finalizer; derives independent per-stream seeds from a base
/// seed (e.g. one stream per dataset instance).
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + (stream + 1) * 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// mt19937_64 with self-contained distributions. The standard library's
/// distribution objects are implementation-defined, so all sampling here is
/// hand-rolled to keep identical seeds producing identical streams on any
/// platform/stdlib combination.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0, bound), bound >= 1. Rejection sampling, no modulo bias.
  std::uint64_t uniform_u64(std::uint64_t bound) {
    const std::uint64_t rem = std::numeric_limits<std::uint64_t>::max() % bound;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - rem;
    std::uint64_t v = next_u64();
    while (v > limit) v = next_u64();
    return v % bound;
  }

  /// Uniform integer in [lo, hi], inclusive.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(uniform_u64(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform_real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform_real(); }

  bool coin() { return (next_u64() & 1ull) != 0; }

  /// Standard normal via Box-Muller (cached pair).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform_real();
    while (u1 <= 0.0) u1 = uniform_real();
    const double u2 = uniform_real();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace splitsat
