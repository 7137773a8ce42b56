#pragma once

#include <cstdint>
#include <vector>

#include "odl/grid.hpp"
#include "odl/scene.hpp"
#include "odl/thresholds.hpp"

namespace odl {

/// Neighbour sets: axes, plus diagonals, plus knight moves.
enum class Stencil { n4 = 4, n8 = 8, n16 = 16 };

struct SolveOptions {
  double init_radius_cells = 4.0;
  Stencil stencil = Stencil::n16;
};

/// First-order fast marching for A = a(x) I: solves |grad d| = sqrt(a) with
/// obstacle nodes removed from the stencil. Each node is updated from the
/// triangles spanned by consecutive stencil directions; n4 reproduces the
/// classic two-axis scheme. Throws Error(unsupported) for matrix metrics.
DistanceField solve_isotropic_fmm(const Scene& scene, double h, const SolveOptions& opt = {});

/// Dijkstra on the lattice graph with the given neighbour stencil and
/// midpoint-rule metric edge lengths. Edges whose interior touches the
/// obstacle are dropped. Throws Error(accuracy) if the metric anisotropy
/// exceeds 10 anywhere on the grid.
DistanceField solve_anisotropic_graph(const Scene& scene, double h, const SolveOptions& opt = {});

struct GradientEstimate {
  Vec2 g;
  bool one_sided = false;
};

/// Upwind (Godunov) difference at a node. Axes with a single finite
/// neighbour use that one-sided difference. Throws Error(masked_stencil)
/// when both axes are blocked or the node itself is not finite.
GradientEstimate nodal_gradient(const DistanceField& field, int i, int j);

/// Gradient at an arbitrary point: bilinear blend of the nodal gradients of
/// the usable cell corners, or the nearest corner's gradient when corner
/// directions differ by more than `jump_deg`.
GradientEstimate numeric_gradient(const DistanceField& field, Vec2 x, double jump_deg = 20.0);

/// Bilinear value where all four cell corners are finite; otherwise the
/// weighted mean of first-order extrapolations v(c) + <grad(c), x - c> from
/// the finite corners. +inf if no corner is usable.
double sample_extrapolated(const DistanceField& field, Vec2 x);

struct ResidualStats {
  double median = 0.0;
  double p95 = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

/// |<A^{-1} grad d, grad d> - 1| over finite nodes not in `exclusion`
/// (empty exclusion excludes nothing).
ResidualStats eikonal_residual(const DistanceField& field, const Metric& metric,
                               const std::vector<std::uint8_t>& exclusion);

/// Source ball, obstacle collar and (dilated) singular nodes.
std::vector<std::uint8_t> residual_exclusion(const DistanceField& field, const Scene& scene,
                                             const std::vector<std::uint8_t>& singular_mask,
                                             const Thresholds& th);

/// Percentile by linear interpolation on a sorted copy; q in [0, 1].
double percentile(std::vector<double> v, double q);

}  // namespace odl
