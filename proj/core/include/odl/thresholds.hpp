#pragma once

#include <string>
#include <utility>
#include <vector>

namespace odl {

/// Tunable tolerances shared by the solver checks. Lengths ending in
/// `_cells` are multiples of the grid spacing h.
struct Thresholds {
  double cluster_deg = 10.0;       // angular gap merging traced gradients
  double jump_deg = 20.0;          // gradient jump flagging a candidate singular cell
  double p_eps = 0.05;             // minimal-norm magnitude treated as critical
  double init_radius_cells = 4.0;  // exact source ball
  double probe_offset_cells = 2.0;
  double probe_length_cells = 4.0;
  double n_starts = 8.0;
  double source_exclusion_cells = 12.0;
  double corner_exclusion_cells = 12.0;
  double boundary_band_cells = 2.0;
  double boundary_snap_cells = 0.25;
  double residual_collar_cells = 2.0;
  double interior_collar_cells = 20.0;
  double boundary_collar_cells = 10.0;
  double normal_cone_deg = 10.0;
  double hull_hit_cells = 2.0;
  double r2_min = 0.8;

  /// Throws Error(parse) for unknown keys or non-finite values.
  void set(const std::string& key, double value);
  /// Parses "key=value".
  void set_from_string(const std::string& assignment);
  /// Every key with its current value, in a fixed order.
  std::vector<std::pair<std::string, double>> entries() const;
};

}  // namespace odl
