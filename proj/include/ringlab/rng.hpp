#pragma once

#include <cmath>
#include <cstdint>

#include "ringlab/angles.hpp"

namespace ringlab {

// Version tag for the per-trial seeding rule, embedded in experiment
// metadata so archived results can be reproduced.
inline constexpr const char* kSeedRuleVersion = "splitmix64-trial-v1";

namespace detail {
inline std::uint64_t avalanche64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}
}  // namespace detail

// Seed for trial i derived from the master seed. Trials get decorrelated
// streams that do not depend on execution order or thread count.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
  return detail::avalanche64(master + (trial + 1) * 0x9E3779B97F4A7C15ull);
}

// SplitMix64 (Steele, Lea & Flood 2014). Small, fast, full 2^64 period,
// and fully specified here so streams are bit-identical across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ull;
    return detail::avalanche64(state_);
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform on (-pi, pi].
  double uniform_angle() { return (0.5 - uniform01()) * kTwoPi; }

  // Standard normal deviate via Box-Muller (pair cached).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform01();  // (0, 1], log is safe
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = kTwoPi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace ringlab
