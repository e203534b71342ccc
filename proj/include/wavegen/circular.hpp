#ifndef WAVEGEN_CIRCULAR_HPP
#define WAVEGEN_CIRCULAR_HPP

#include <cmath>
#include <numbers>
#include <span>

namespace wavegen {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Wrap an angle into the principal interval (-pi, pi].
inline double wrap_angle(double a) {
  double r = std::remainder(a, two_pi);
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

/// Circular mean of a set of angles: the argument of the mean resultant
/// vector. Returns 0 for an empty set or a vanishing resultant.
inline double circular_mean(std::span<const double> angles) {
  double s = 0.0;
  double c = 0.0;
  for (double a : angles) {
    s += std::sin(a);
    c += std::cos(a);
  }
  return std::atan2(s, c);
}

/// Shift `angle` by the integer multiple of 2*pi that places it within pi
/// of `ref`.
inline double unwrap_near(double angle, double ref) {
  double n = std::round((angle - ref) / two_pi);
  return angle - n * two_pi;
}

}  // namespace wavegen

#endif  // WAVEGEN_CIRCULAR_HPP
