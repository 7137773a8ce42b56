#include "odl/thresholds.hpp"

#include <cmath>
#include <cstdlib>

#include "odl/errors.hpp"

namespace odl {
namespace {

template <typename T, typename F>
void for_each_field(T& t, F&& f) {
  f("cluster_deg", t.cluster_deg);
  f("jump_deg", t.jump_deg);
  f("p_eps", t.p_eps);
  f("init_radius_cells", t.init_radius_cells);
  f("probe_offset_cells", t.probe_offset_cells);
  f("probe_length_cells", t.probe_length_cells);
  f("n_starts", t.n_starts);
  f("source_exclusion_cells", t.source_exclusion_cells);
  f("corner_exclusion_cells", t.corner_exclusion_cells);
  f("boundary_band_cells", t.boundary_band_cells);
  f("boundary_snap_cells", t.boundary_snap_cells);
  f("residual_collar_cells", t.residual_collar_cells);
  f("interior_collar_cells", t.interior_collar_cells);
  f("boundary_collar_cells", t.boundary_collar_cells);
  f("normal_cone_deg", t.normal_cone_deg);
  f("hull_hit_cells", t.hull_hit_cells);
  f("r2_min", t.r2_min);
}

}  // namespace

void Thresholds::set(const std::string& key, double value) {
  if (!std::isfinite(value)) throw Error(ErrorCode::parse, "threshold " + key + " must be finite");
  bool found = false;
  for_each_field(*this, [&](const char* name, double& field) {
    if (key == name) {
      field = value;
      found = true;
    }
  });
  if (!found) throw Error(ErrorCode::parse, "unknown threshold '" + key + "'");
}

void Thresholds::set_from_string(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorCode::parse, "threshold override must look like key=value");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string val = assignment.substr(eq + 1);
  char* end = nullptr;
  const double v = std::strtod(val.c_str(), &end);
  if (val.empty() || end == nullptr || *end != '\0') {
    throw Error(ErrorCode::parse, "threshold value for " + key + " is not a number");
  }
  set(key, v);
}

std::vector<std::pair<std::string, double>> Thresholds::entries() const {
  std::vector<std::pair<std::string, double>> out;
  Thresholds copy = *this;
  for_each_field(copy, [&](const char* name, double& field) { out.emplace_back(name, field); });
  return out;
}

}  // namespace odl
