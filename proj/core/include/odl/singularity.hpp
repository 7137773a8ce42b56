#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "odl/grid.hpp"
#include "odl/hull.hpp"
#include "odl/scene.hpp"
#include "odl/thresholds.hpp"

namespace odl {

/// Numeric reachable gradients at a point together with their convex hull
/// and its minimal-norm element.
struct GradientSet {
  std::vector<Vec2> reachables;  // unit vectors, one per cluster
  ConvexHull2D hull;
  Vec2 min_norm_point;
  bool is_singular = false;
  bool boundary_mode = false;
  int traces = 0;
  int failed_traces = 0;
};

/// Traces short minimizer pieces from starts on a circle of radius
/// probe_offset around x (projected onto the boundary when x is on it),
/// negates their chord directions and clusters them by angle. Throws
/// Error(degenerate_point) when every trace fails and Error(precondition)
/// inside the source ball.
GradientSet reachable_gradients_numeric(const DistanceField& field, const Scene& scene, Vec2 x,
                                        const Thresholds& th);

/// Single-linkage clustering of unit vectors on the circle; returns the
/// normalized mean of each cluster, ordered by angle.
std::vector<Vec2> cluster_directions(const std::vector<Vec2>& dirs, double cluster_deg);

struct SingularDetection {
  std::vector<std::uint8_t> candidates;  // gradient jump above jump_deg
  std::vector<std::uint8_t> confirmed;   // candidates with >= 2 reachable clusters
  std::size_t n_candidates = 0;
  std::size_t n_confirmed = 0;
};

/// Flags nodes whose upwind gradient direction differs from a 4-neighbour
/// by more than jump_deg, then keeps those confirmed by
/// reachable_gradients_numeric. Nodes near k0 or near boundary corners are
/// never flagged.
SingularDetection detect_singular_set(const DistanceField& field, const Scene& scene, const Thresholds& th);

struct ArcSample {
  double t = 0.0;
  Vec2 x;
  double d = 0.0;
  double hull_dist = 0.0;
  double p_norm = 0.0;
  bool singular = false;
};

struct SingularArc {
  Vec2 seed;
  bool boundary_seeded = false;
  std::vector<ArcSample> samples;
  bool flagged = false;  // lost singularity for more than three steps
  std::string stop_reason;  // "t_max", "bbox_exit", "critical", "lost_singularity"
};

/// Explicit Euler on x' = minimal-norm element of the reachable-gradient
/// hull with dt = h. A seed on the boundary is first moved one cell along
/// the outward normal.
SingularArc integrate_singular_flow(const DistanceField& field, const Scene& scene, Vec2 x0, double t_max,
                                    const Thresholds& th);

struct HullSearch {
  std::vector<Vec2> hits;  // hull boundary samples near confirmed singular nodes
  Vec2 argmax;             // maximizer of d over the hull boundary
  double max_d = 0.0;
};

/// Throws Error(precondition) for an empty obstacle.
HullSearch hull_singularity_search(const DistanceField& field, const Scene& scene,
                                   const std::vector<std::uint8_t>& confirmed, const Thresholds& th);

/// Boundary points of O next to confirmed singular nodes, one per connected
/// group of such nodes.
std::vector<Vec2> boundary_singular_points(const DistanceField& field, const Scene& scene,
                                           const std::vector<std::uint8_t>& confirmed, const Thresholds& th);

struct PropagationProbe {
  Vec2 x0;
  double radius = 0.0;
  std::size_t annulus_count = 0;  // confirmed nodes with h < |x - x0| < radius
  std::vector<Vec2> chain;        // connected confirmed nodes reachable from x0
  double chain_extent = 0.0;      // farthest chain node from x0
  bool chain_outside_obstacle = true;
  bool leaves_x0 = false;         // chain reaches the outer part of the annulus
};

/// Follows 8-connected confirmed nodes from those next to x0 within the
/// disk of the given radius. Throws Error(precondition) when x0 has no
/// confirmed node within boundary_band cells and Error(accuracy) when the
/// annulus holds no singular node.
PropagationProbe local_propagation_probe(const DistanceField& field, const Scene& scene,
                                         const std::vector<std::uint8_t>& confirmed, Vec2 x0, double radius,
                                         const Thresholds& th);

}  // namespace odl
