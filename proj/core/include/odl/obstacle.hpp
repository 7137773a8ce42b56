#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "odl/vec2.hpp"

namespace odl {

struct Circle {
  Vec2 center;
  double radius = 1.0;
};

using ImplicitFn = std::function<double(Vec2)>;
using ImplicitGradientFn = std::function<Vec2(Vec2)>;

/// Compact obstacle described by an implicit function phi: negative inside,
/// zero on the boundary, positive outside. Disk, ellipse and the two-disk
/// crescent have closed-form paths for distance, projection and curvature;
/// custom shapes fall back to Newton iterations along grad(phi).
class Obstacle {
 public:
  enum class Kind { none, disk, ellipse, crescent, custom };

  static Obstacle none();
  static Obstacle disk(Vec2 center, double radius);
  /// Axis-aligned ellipse x^2/a^2 + y^2/b^2 = 1 around `center`.
  static Obstacle ellipse(Vec2 center, double semi_x, double semi_y);
  /// `outer` minus `inner`; phi = max(phi_outer, -phi_inner).
  static Obstacle crescent(Circle outer, Circle inner);
  static Obstacle custom(ImplicitFn phi, ImplicitGradientFn grad, Box bounds,
                         std::vector<Vec2> corners = {}, bool convex = false);

  Kind kind() const { return kind_; }
  bool empty() const { return kind_ == Kind::none; }
  bool convex() const { return convex_; }
  bool analytic() const { return kind_ != Kind::custom; }

  double phi(Vec2 x) const;
  Vec2 phi_gradient(Vec2 x) const;

  /// Signed Euclidean distance to the boundary (exact for disk, ellipse and
  /// crescent; projection-based for custom shapes).
  double signed_distance(Vec2 x) const;

  /// Closest boundary point. Throws Error(no_convergence) if the Newton
  /// iteration for custom shapes does not reach proj_tol().
  Vec2 project(Vec2 x) const;

  /// Unit outward normal grad(phi)/|grad(phi)| at a boundary point.
  Vec2 normal_at(Vec2 boundary_point) const;

  /// Signed curvature of the boundary at a boundary point (positive where
  /// the obstacle is locally convex).
  double curvature_at(Vec2 boundary_point) const;

  /// Roughly n points on the boundary, ordered along each boundary piece.
  std::vector<Vec2> boundary_samples(int n) const;

  /// Points where the boundary fails to be C^2 (crescent tips).
  const std::vector<Vec2>& corners() const { return corners_; }

  Box bounds() const { return bounds_; }
  double proj_tol() const { return analytic() ? 1e-9 : 1e-6; }

  std::optional<Circle> as_disk() const;
  Circle outer_circle() const { return c1_; }
  Circle inner_circle() const { return c2_; }
  Vec2 center() const { return c1_.center; }
  Vec2 semi_axes() const { return axes_; }

 private:
  Obstacle() = default;

  Vec2 project_ellipse(Vec2 x) const;
  Vec2 project_crescent(Vec2 x) const;
  Vec2 project_newton(Vec2 x) const;
  bool on_outer_arc(Vec2 p) const;
  bool on_inner_arc(Vec2 p) const;

  Kind kind_ = Kind::none;
  bool convex_ = true;
  Circle c1_{};   // disk, ellipse center, crescent outer
  Circle c2_{};   // crescent inner
  Vec2 axes_{};   // ellipse semi-axes
  ImplicitFn phi_fn_;
  ImplicitGradientFn grad_fn_;
  Box bounds_{};
  std::vector<Vec2> corners_;
};

}  // namespace odl
