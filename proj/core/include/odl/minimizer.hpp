#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "odl/grid.hpp"
#include "odl/scene.hpp"

namespace odl {

/// Polyline from a start point towards k0.
struct MinimizerPath {
  std::vector<Vec2> points;
  double tau = 0.0;
  /// Inclusive index ranges from a point placed by a slide to a later one,
  /// with every point in between within the contact collar.
  std::vector<std::pair<std::size_t, std::size_t>> contact_intervals;
  double max_curvature = 0.0;  // largest discrete turning rate
  std::size_t slides = 0;      // steps that were deflected by the obstacle
  bool reached_target = false;
};

struct TraceOptions {
  double step_cells = 0.5;
  double jump_deg = 20.0;
  /// Slide runs separated only by points this close to the boundary are
  /// merged into one contact interval.
  double contact_collar_cells = 0.125;
  /// Stop after this much Euclidean travel (partial traces); inf = to k0.
  double max_length = std::numeric_limits<double>::infinity();
  int stagnation_steps = 20;
};

/// Steps of h/2 against the metric gradient direction A^{-1} grad d. Steps
/// that would enter the obstacle lose their inward normal component and are
/// projected back onto the boundary if still inside. Stops inside the source
/// ball and appends k0. Throws Error(trapped_trace) on stagnation.
MinimizerPath backtrace_minimizer(const DistanceField& field, const Scene& scene, Vec2 x,
                                  const TraceOptions& opt = {});

/// Midpoint-rule metric length.
double path_length(const std::vector<Vec2>& points, const Metric& metric);
double path_length(const MinimizerPath& path, const Metric& metric);

/// Maximal runs of points within `collar` of the boundary.
std::vector<std::pair<std::size_t, std::size_t>> find_contact_intervals(const Scene& scene,
                                                                       const std::vector<Vec2>& points,
                                                                       double collar);
/// Maximal runs of set flags, merged across gaps whose points all lie
/// within `collar` of the boundary.
std::vector<std::pair<std::size_t, std::size_t>> slide_intervals(const Scene& scene,
                                                                const std::vector<Vec2>& points,
                                                                const std::vector<std::uint8_t>& slid,
                                                                double collar);

/// Largest |<unit velocity, outward normal>| over interior contact samples;
/// zero when the path never touches the obstacle.
double contact_normal_component(const Scene& scene, const MinimizerPath& path);

}  // namespace odl
