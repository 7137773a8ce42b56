#pragma once

#include <algorithm>
#include <array>
#include <cmath>

namespace odl {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(Vec2 o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr Vec2& operator-=(Vec2 o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr Vec2& operator*=(double s) {
    x *= s;
    y *= s;
    return *this;
  }

  friend constexpr bool operator==(Vec2, Vec2) = default;
};

constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Vec2 operator-(Vec2 a) { return {-a.x, -a.y}; }
constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
constexpr Vec2 operator*(Vec2 a, double s) { return {s * a.x, s * a.y}; }
constexpr Vec2 operator/(Vec2 a, double s) { return {a.x / s, a.y / s}; }

constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
constexpr double norm2(Vec2 a) { return dot(a, a); }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }
inline double distance(Vec2 a, Vec2 b) { return norm(a - b); }

/// Counterclockwise rotation by a quarter turn.
constexpr Vec2 perp(Vec2 a) { return {-a.y, a.x}; }

inline Vec2 normalized(Vec2 a) {
  const double n = norm(a);
  return n > 0.0 ? a / n : Vec2{};
}

inline Vec2 unit_at_angle(double theta) { return {std::cos(theta), std::sin(theta)}; }

/// Unsigned angle between two nonzero vectors, in radians.
inline double angle_between(Vec2 a, Vec2 b) {
  return std::atan2(std::abs(cross(a, b)), dot(a, b));
}

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }

/// Maps an angle to (-pi, pi].
inline double canonical_angle(double theta) {
  double t = std::remainder(theta, 2.0 * kPi);
  if (t <= -kPi) t += 2.0 * kPi;
  return t;
}

/// Axis-aligned box.
struct Box {
  Vec2 lo;
  Vec2 hi;

  constexpr double width() const { return hi.x - lo.x; }
  constexpr double height() const { return hi.y - lo.y; }
  double diameter() const { return std::hypot(width(), height()); }
  constexpr bool contains(Vec2 p, double pad = 0.0) const {
    return p.x >= lo.x - pad && p.x <= hi.x + pad && p.y >= lo.y - pad && p.y <= hi.y + pad;
  }
  /// Distance from an interior point to the nearest edge (negative outside).
  constexpr double inner_margin(Vec2 p) const {
    return std::min(std::min(p.x - lo.x, hi.x - p.x), std::min(p.y - lo.y, hi.y - p.y));
  }
};

/// 2x2 matrix, row-major.
struct Mat2 {
  double a11 = 1.0, a12 = 0.0, a21 = 0.0, a22 = 1.0;

  static constexpr Mat2 identity() { return {}; }
  static constexpr Mat2 diag(double d1, double d2) { return {d1, 0.0, 0.0, d2}; }
  static constexpr Mat2 scaled(double s) { return {s, 0.0, 0.0, s}; }

  constexpr Vec2 operator*(Vec2 v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }
  constexpr double det() const { return a11 * a22 - a12 * a21; }
  constexpr Mat2 inverse() const {
    const double d = det();
    return {a22 / d, -a12 / d, -a21 / d, a11 / d};
  }
  constexpr double quad(Vec2 v) const { return dot(v, (*this) * v); }
  constexpr bool is_symmetric(double tol = 1e-12) const {
    return (a12 - a21) <= tol && (a21 - a12) <= tol;
  }
  /// Eigenvalues of the symmetric part, ascending.
  std::array<double, 2> eigenvalues() const {
    const double off = 0.5 * (a12 + a21);
    const double mean = 0.5 * (a11 + a22);
    const double r = std::hypot(0.5 * (a11 - a22), off);
    return {mean - r, mean + r};
  }

  friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

}  // namespace odl
