#include "odl/grid.hpp"

#include <cmath>
#include <limits>

#include "odl/errors.hpp"
#include "odl/scene.hpp"

namespace odl {

Grid Grid::build(const Scene& scene, double h, double init_radius) {
  if (!(h > 0.0)) throw Error(ErrorCode::precondition, "grid spacing must be positive");
  const Box b = scene.bbox();
  Grid g;
  g.origin = b.lo;
  g.h = h;
  g.nx = static_cast<int>(std::floor(b.width() / h + 1e-9)) + 1;
  g.ny = static_cast<int>(std::floor(b.height() / h + 1e-9)) + 1;
  if (g.nx < 8 || g.ny < 8) throw Error(ErrorCode::precondition, "grid needs at least 8 nodes per axis");
  g.mask.assign(g.size(), CellType::free);
  const Obstacle& o = scene.obstacle();
  const Vec2 k0 = scene.k0();
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const Vec2 p = g.point(i, j);
      CellType& c = g.mask[g.index(i, j)];
      if (!o.empty() && o.phi(p) < 0.0) {
        c = CellType::obstacle;
      } else if (distance(p, k0) <= init_radius) {
        c = CellType::source;
      }
    }
  }
  int si = 0, sj = 0;
  g.nearest(k0, si, sj);
  if (g.type(si, sj) == CellType::free) g.mask[g.index(si, sj)] = CellType::source;
  return g;
}

bool Grid::locate(Vec2 x, int& i, int& j, double& fx, double& fy) const {
  const double u = (x.x - origin.x) / h;
  const double v = (x.y - origin.y) / h;
  const double eps = 1e-9;
  if (!(u >= -eps && v >= -eps && u <= (nx - 1) + eps && v <= (ny - 1) + eps)) return false;
  i = std::clamp(static_cast<int>(std::floor(u)), 0, nx - 2);
  j = std::clamp(static_cast<int>(std::floor(v)), 0, ny - 2);
  fx = std::clamp(u - i, 0.0, 1.0);
  fy = std::clamp(v - j, 0.0, 1.0);
  return true;
}

void Grid::nearest(Vec2 x, int& i, int& j) const {
  i = std::clamp(static_cast<int>(std::lround((x.x - origin.x) / h)), 0, nx - 1);
  j = std::clamp(static_cast<int>(std::lround((x.y - origin.y) / h)), 0, ny - 1);
}

bool DistanceField::finite(int i, int j) const {
  return grid.valid(i, j) && std::isfinite(values[grid.index(i, j)]);
}

double DistanceField::sample(Vec2 x) const {
  int i, j;
  double fx, fy;
  if (!grid.locate(x, i, j, fx, fy)) return std::numeric_limits<double>::infinity();
  const double v00 = at(i, j), v10 = at(i + 1, j), v01 = at(i, j + 1), v11 = at(i + 1, j + 1);
  if (!(std::isfinite(v00) && std::isfinite(v10) && std::isfinite(v01) && std::isfinite(v11))) {
    return std::numeric_limits<double>::infinity();
  }
  return (1 - fx) * (1 - fy) * v00 + fx * (1 - fy) * v10 + (1 - fx) * fy * v01 + fx * fy * v11;
}

double DistanceField::sample_available(Vec2 x) const {
  int i, j;
  double fx, fy;
  if (!grid.locate(x, i, j, fx, fy)) return std::numeric_limits<double>::infinity();
  const double w[4] = {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy};
  const double v[4] = {at(i, j), at(i + 1, j), at(i, j + 1), at(i + 1, j + 1)};
  double sw = 0.0, s = 0.0;
  for (int k = 0; k < 4; ++k) {
    if (std::isfinite(v[k])) {
      sw += w[k];
      s += w[k] * v[k];
    }
  }
  if (sw <= 0.0) {
    // x sits on a corner whose value is missing; fall back to any finite corner.
    for (int k = 0; k < 4; ++k) {
      if (std::isfinite(v[k])) return v[k];
    }
    return std::numeric_limits<double>::infinity();
  }
  return s / sw;
}

bool DistanceField::sample_ok(Vec2 x) const { return std::isfinite(sample(x)); }

}  // namespace odl
