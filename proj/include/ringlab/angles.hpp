#pragma once

#include <cmath>
#include <stdexcept>

namespace ringlab {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Canonical representative of x on the circle, in (-pi, pi].
// IEEE remainder is exact, so wrap_angle is idempotent and the identity on
// (-pi, pi].
inline double wrap_angle(double x) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("wrap_angle: non-finite input");
  }
  double r = std::remainder(x, kTwoPi);  // [-pi, pi]
  if (r <= -kPi) r = kPi;                // -pi and pi are the same point
  return r;
}

// Distance between two angles along the circle, in [0, pi].
inline double circular_distance(double a, double b) {
  return std::fabs(wrap_angle(a - b));
}

}  // namespace ringlab
