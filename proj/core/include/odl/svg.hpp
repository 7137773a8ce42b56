#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "odl/grid.hpp"
#include "odl/scene.hpp"

namespace odl {

struct SvgStyle {
  int width_px = 600;
  /// Contour levels of d; empty selects every 0.5 up to the largest finite value.
  std::vector<double> levels;
  /// Contours are traced on at most this many cells per axis.
  int max_contour_cells = 400;
};

/// Everything drawn in one figure; null or empty members are skipped.
struct SvgLayers {
  const DistanceField* field = nullptr;
  const std::vector<std::uint8_t>* singular = nullptr;  // node mask on field's grid
  std::vector<std::vector<Vec2>> polylines;             // arcs or minimizers
};

/// Draws the filled obstacle, contour lines of d, singular nodes,
/// polylines and finally k0 on top. Numbers are printed at fixed precision so
/// identical inputs give identical bytes. Throws Error(precondition) for a
/// mask without a field or with a different size.
std::string render_svg(const Scene& scene, const SvgLayers& layers, const SvgStyle& style = {});

}  // namespace odl
