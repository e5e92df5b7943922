#ifndef ASLAM_GEOMETRY_HPP
#define ASLAM_GEOMETRY_HPP

#include <cmath>
#include <numbers>

namespace aslam {

/// Planar point or displacement.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(Vec2, Vec2) = default;

  [[nodiscard]] constexpr double squared_norm() const { return x * x + y * y; }
  [[nodiscard]] double norm() const { return std::hypot(x, y); }
};

/// Wraps an angle to [-pi, pi).
inline double wrap_angle(double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(phi + std::numbers::pi, two_pi);
  if (wrapped < 0.0) {
    wrapped += two_pi;
  }
  wrapped -= std::numbers::pi;
  // fmod can land exactly on +pi after the shift when phi is a tiny negative.
  return wrapped >= std::numbers::pi ? -std::numbers::pi : wrapped;
}

}  // namespace aslam

#endif
