#pragma once

#include <vector>

#include "odl/vec2.hpp"

namespace odl {

/// Convex polygon with counterclockwise vertices. Degenerate hulls (a point
/// or a segment) are allowed so the same type can hold sets of gradients.
class ConvexHull2D {
 public:
  ConvexHull2D() = default;

  /// Andrew's monotone chain; collinear points are dropped.
  static ConvexHull2D from_points(std::vector<Vec2> pts);

  const std::vector<Vec2>& vertices() const { return v_; }
  std::size_t size() const { return v_.size(); }
  bool is_polygon() const { return v_.size() >= 3; }

  /// Vertex maximizing <dir, v>.
  Vec2 support(Vec2 dir) const;
  bool contains(Vec2 p, double tol = 0.0) const;
  /// Closest point of the hull (interior included) to p.
  Vec2 closest_point(Vec2 p) const;
  /// Euclidean distance to the hull; zero inside.
  double distance(Vec2 p) const;
  /// Distance to the hull boundary, negative inside.
  double signed_boundary_distance(Vec2 p) const;

  double area() const;
  double perimeter() const;
  /// Points on the boundary at spacing no larger than `step`.
  std::vector<Vec2> boundary_samples(double step) const;
  /// True if every turn is counterclockwise (strictly convex).
  bool is_convex() const;

 private:
  std::vector<Vec2> v_;
};

Vec2 closest_point_on_segment(Vec2 a, Vec2 b, Vec2 p);

/// Minimal-norm element of the convex hull of `pts`.
Vec2 min_norm_point(const std::vector<Vec2>& pts);

}  // namespace odl
