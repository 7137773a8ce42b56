#pragma once

#include <vector>

#include "odl/vec2.hpp"

namespace odl {

/// Disk obstacle with Euclidean metric and a target outside it.
struct DiskScene {
  Vec2 center;
  double R = 1.0;
  Vec2 k0{2.0, 0.0};

  /// Throws Error(precondition) unless R > 0 and |k0 - center| > R.
  void validate() const;
};

/// Shortest path x -> k0: tangent segment, arc on the circle, tangent
/// segment. Unobstructed paths have wraps == false and a single segment.
struct TangentArcPath {
  Vec2 start;
  Vec2 t1;  // first contact point
  Vec2 t2;  // last contact point
  Vec2 end;
  bool wraps = false;
  int turn = 0;           // +1 counterclockwise around the center, -1 clockwise
  double theta1 = 0.0;    // angle of t1 around the center
  double dtheta = 0.0;    // unsigned swept angle
  double leg1 = 0.0;
  double arc = 0.0;
  double leg2 = 0.0;
  double total_length = 0.0;

  /// Unit velocity at the start.
  Vec2 initial_velocity(const DiskScene& ds) const;
  /// Point at arc length s from the start (clamped).
  Vec2 at(const DiskScene& ds, double s) const;
  /// Arc-length samples at spacing <= step, both ends included.
  std::vector<Vec2> polyline(const DiskScene& ds, double step) const;
};

double disk_distance(const DiskScene& ds, Vec2 x);
/// All global minimizers: one generically, two on the symmetry ray.
std::vector<TangentArcPath> disk_minimizers(const DiskScene& ds, Vec2 x);
/// Reachable gradients -gamma'(0) over all minimizers.
std::vector<Vec2> disk_reachable_gradients(const DiskScene& ds, Vec2 x);
/// True on the ray opening opposite k0 (where two minimizers exist).
bool on_disk_symmetry_ray(const DiskScene& ds, Vec2 x, double tol = 1e-12);
/// Direction from the center away from k0 along the symmetry ray.
Vec2 disk_shadow_axis(const DiskScene& ds);

/// Involute c(r) = R (cos r + r sin r, sin r - r cos r).
Vec2 involute_curve(double R, double r);
/// Closed form 1 / (R r); throws Error(domain) for r <= 0.
double involute_curvature(double R, double r);
/// Curvature of involute_curve from central differences in r.
double involute_curvature_fd(double R, double r, double step = 1e-4);

struct CorollaryRow {
  double alpha = 0.0;
  double r = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct CorollarySummary {
  double alpha = 0.0;
  double slope = 0.0;         // log-log slope of lhs/rhs against r
  double growth_slope = 0.0;  // -slope: positive when the ratio blows up as r -> 0
  bool bounded = false;       // |slope| < 0.05
};

struct CorollaryScan {
  std::vector<CorollaryRow> rows;
  std::vector<CorollarySummary> summary;
};

/// lhs(r) = r^{-a} (sin r / r - cos r) against
/// rhs(r) = |((cos r - 1)/r + sin r, sin r / r - cos r)|^{1+a}, C = 1.
/// Requires the unit-disk configuration with k0 on the negative x axis.
CorollaryScan corollary_defect_scan(const DiskScene& ds, const std::vector<double>& alphas,
                                    const std::vector<double>& r_values);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace odl
