#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace coopemit {

/// splitmix64 finalizer; used to turn (seed + index) into well-mixed engine seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of realization `index` within a run seeded by `base`.
constexpr std::uint64_t realization_seed(std::uint64_t base, std::uint64_t index) noexcept {
  return base + index;
}

// std::normal_distribution is implementation-defined, so Gaussian draws are
// done by hand on top of the (fully specified) mt19937_64 bit stream.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  /// Uniform in (0, 1], 53 random bits.
  double uniform_open0() {
    return (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Standard normal via Box-Muller; both variates are used.
  double standard_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double radius = std::sqrt(-2.0 * std::log(uniform_open0()));
    const double angle = 2.0 * std::numbers::pi * uniform_open0();
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace coopemit
