#pragma once

#include <string>
#include <vector>

#include "odl/hull.hpp"
#include "odl/metric.hpp"
#include "odl/obstacle.hpp"

namespace odl {

/// Obstacle, target, metric and computational box. Immutable once built.
class Scene {
 public:
  /// Throws Error(precondition) if k0 is not strictly outside the obstacle
  /// or the box misses k0 or the obstacle. Insufficient padding only adds a
  /// warning.
  Scene(Obstacle obstacle, Vec2 k0, Metric metric, Box bbox);

  const Obstacle& obstacle() const { return obstacle_; }
  Vec2 k0() const { return k0_; }
  const Metric& metric() const { return metric_; }
  Box bbox() const { return bbox_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// Padding required around obstacle and k0: half their joint diameter.
  double required_padding() const;

 private:
  Obstacle obstacle_;
  Vec2 k0_;
  Metric metric_;
  Box bbox_;
  std::vector<std::string> warnings_;
};

/// Signed Euclidean distance to the obstacle boundary, negative inside.
double signed_distance(const Scene& scene, Vec2 x);

/// Outward unit normal at the boundary projection of x. Requires
/// |phi(x)| < band_width.
Vec2 outward_normal(const Scene& scene, Vec2 x, double band_width);

Vec2 project_boundary(const Scene& scene, Vec2 x);

double boundary_curvature(const Scene& scene, Vec2 boundary_point);

/// Hull of `n_samples` boundary points. Throws Error(degenerate_point) when
/// fewer than three non-collinear samples exist.
ConvexHull2D convex_hull_2d(const Scene& scene, int n_samples);

enum class Region { I, S };

const char* to_string(Region r);

/// I if the straight segment [x, k0] avoids the open obstacle. Sampled at
/// `seg_samples` points, then once more at twice that density.
Region classify_region(const Scene& scene, Vec2 x, int seg_samples = 256);

}  // namespace odl
