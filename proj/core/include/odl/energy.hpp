#pragma once

#include <string>
#include <vector>

#include "odl/grid.hpp"
#include "odl/minimizer.hpp"
#include "odl/scene.hpp"

namespace odl {

struct EnergyOptions {
  int max_iters = 400000;
  double rel_tol = 1e-6;  // relative energy change over `window` iterations
  int window = 50;
  double bump = 1e-3;     // lateral sin(pi t) offset of the initial path, relative to |x - k0|
};

struct EnergyResult {
  double E_value = 0.0;
  MinimizerPath path;
  int iterations = 0;
  bool converged = false;
  std::size_t rejected_steps = 0;  // steps undone because they raised E
  double speed_defect = 0.0;       // max segment length / mean - 1
};

/// N sum <A(m_i) d_i, d_i> over the N = n_knots - 1 segments of a polyline
/// with uniform parameter spacing.
double path_energy(const std::vector<Vec2>& knots, const Metric& metric);

/// Gradient descent on the interior knots with endpoints pinned at x and k0.
/// Knots that enter the obstacle are projected onto its boundary after each
/// step; steps that would raise the energy are halved and retried. On
/// failure to converge the best iterate is returned with converged = false.
EnergyResult minimize_energy(const Scene& scene, Vec2 x, int n_knots, const EnergyOptions& opt = {});

struct EnergyCheckRow {
  Vec2 x;
  double sqrt_E = 0.0;
  double d_field = 0.0;
  double rel_gap = 0.0;
  bool skipped = false;
  std::string reason;  // empty, "near_target", "inside_obstacle" or "unreachable"
};

struct EnergyCheck {
  std::vector<EnergyCheckRow> rows;
  double max_rel_gap = 0.0;
  std::size_t evaluated = 0;
};

/// Per sample |sqrt(E) - d| / d against the field value. Samples closer to
/// k0 than `exclusion_radius` are skipped with reason "near_target".
EnergyCheck energy_distance_check(const Scene& scene, const DistanceField& field,
                                  const std::vector<Vec2>& samples, int n_knots,
                                  double exclusion_radius, const EnergyOptions& opt = {});

}  // namespace odl
