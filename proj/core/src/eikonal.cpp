#include "odl/eikonal.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <utility>

#include "odl/errors.hpp"

namespace odl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using HeapItem = std::pair<double, std::uint32_t>;
using MinHeap = std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<HeapItem>>;

DistanceField make_field(const Scene& scene, double h, const SolveOptions& opt) {
  if (!(opt.init_radius_cells >= 1.0)) {
    throw Error(ErrorCode::precondition, "source radius must cover at least one cell");
  }
  DistanceField f;
  f.init_radius = opt.init_radius_cells * h;
  f.grid = Grid::build(scene, h, f.init_radius);
  f.k0 = scene.k0();
  f.values.assign(f.grid.size(), kInf);
  f.status.assign(f.grid.size(), NodeStatus::far);
  const Metric& m = scene.metric();
  for (std::size_t idx = 0; idx < f.grid.size(); ++idx) {
    if (f.grid.mask[idx] == CellType::source) {
      f.values[idx] = m.segment_length(f.k0, f.grid.point(idx));
      f.status[idx] = NodeStatus::accepted;
    }
  }
  return f;
}

void count_unreachable(DistanceField& f) {
  f.unreachable = 0;
  for (std::size_t idx = 0; idx < f.grid.size(); ++idx) {
    if (f.grid.mask[idx] != CellType::obstacle && !std::isfinite(f.values[idx])) ++f.unreachable;
  }
}

double accepted_value(const DistanceField& f, int i, int j) {
  if (!f.grid.valid(i, j)) return kInf;
  const std::size_t idx = f.grid.index(i, j);
  return f.status[idx] == NodeStatus::accepted ? f.values[idx] : kInf;
}

using Offset = std::pair<int, int>;

// Stencil directions in counterclockwise order.
std::vector<Offset> stencil_ring(Stencil s) {
  switch (s) {
    case Stencil::n4: return {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    case Stencil::n8: return {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
    case Stencil::n16:
      return {{1, 0},   {2, 1},   {1, 1},   {1, 2},  {0, 1},  {-1, 2}, {-1, 1}, {-2, 1},
              {-1, 0}, {-2, -1}, {-1, -1}, {-1, -2}, {0, -1}, {1, -2}, {1, -1}, {2, -1}};
  }
  return {};
}

// A knight move is usable only if the two nodes it passes between are free.
bool offset_clear(const Grid& g, int i, int j, Offset o) {
  const auto [di, dj] = o;
  if (std::abs(di) == 2) {
    return g.type(i + di / 2, j) != CellType::obstacle && g.type(i + di / 2, j + dj) != CellType::obstacle;
  }
  if (std::abs(dj) == 2) {
    return g.type(i, j + dj / 2) != CellType::obstacle && g.type(i + di, j + dj / 2) != CellType::obstacle;
  }
  return true;
}

// min over lam in [0, 1] of T1 + lam (T2 - T1) + f |p1 + lam (p2 - p1)|: the
// value at the origin reached through the edge [p1, p2].
double simplex_update(Vec2 p1, double t1, Vec2 p2, double t2, double f) {
  double best = std::min(t1 + f * norm(p1), t2 + f * norm(p2));
  if (!std::isfinite(t1) || !std::isfinite(t2)) return best;
  const Vec2 e = p2 - p1;
  const double c = -(t2 - t1) / f;
  const double ee = norm2(e);
  if (c * c >= ee) return best;
  const double pe = dot(p1, e);
  const double pp = norm2(p1);
  const double qa = ee * (ee - c * c);
  const double qb = 2.0 * pe * (ee - c * c);
  const double qc = pe * pe - c * c * pp;
  const double disc = qb * qb - 4.0 * qa * qc;
  if (disc < 0.0) return best;
  const double sq = std::sqrt(disc);
  for (double lam : {(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)}) {
    if (lam < 0.0 || lam > 1.0) continue;
    if ((pe + lam * ee) * c < 0.0) continue;
    best = std::min(best, t1 + lam * (t2 - t1) + f * norm(p1 + lam * e));
  }
  return best;
}

}  // namespace

DistanceField solve_isotropic_fmm(const Scene& scene, double h, const SolveOptions& opt) {
  const Metric& m = scene.metric();
  if (!m.is_isotropic()) throw Error(ErrorCode::unsupported, "fast marching needs an isotropic metric");
  DistanceField f = make_field(scene, h, opt);
  f.solver = "fmm";
  const Grid& g = f.grid;
  const std::vector<Offset> ring = stencil_ring(opt.stencil);
  const int n = static_cast<int>(ring.size());
  MinHeap heap;

  auto vertex = [&](int i, int j, int k, Vec2& p) {
    const Offset o = ring[static_cast<std::size_t>((k % n + n) % n)];
    p = Vec2{h * o.first, h * o.second};
    if (!g.valid(i + o.first, j + o.second) || !offset_clear(g, i, j, o)) return kInf;
    return accepted_value(f, i + o.first, j + o.second);
  };

  // Node (ai, aj) was just accepted; refresh every far neighbour through the
  // two triangles that contain it.
  auto relax_neighbours = [&](int ai, int aj) {
    for (int k = 0; k < n; ++k) {
      const int ni = ai + ring[static_cast<std::size_t>(k)].first;
      const int nj = aj + ring[static_cast<std::size_t>(k)].second;
      if (!g.valid(ni, nj)) continue;
      const std::size_t nidx = g.index(ni, nj);
      if (g.mask[nidx] == CellType::obstacle || f.status[nidx] == NodeStatus::accepted) continue;
      const int back = (k + n / 2) % n;  // direction from the neighbour to (ai, aj)
      const double slow = std::sqrt(m.scale(g.point(ni, nj)));
      Vec2 p0, pm, pp;
      const double t0 = vertex(ni, nj, back, p0);
      if (!std::isfinite(t0)) continue;
      const double tm = vertex(ni, nj, back - 1, pm);
      const double tp = vertex(ni, nj, back + 1, pp);
      const double t = std::min(simplex_update(p0, t0, pm, tm, slow), simplex_update(p0, t0, pp, tp, slow));
      if (t < f.values[nidx]) {
        f.values[nidx] = t;
        heap.emplace(t, static_cast<std::uint32_t>(nidx));
      }
    }
  };

  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (g.type(i, j) == CellType::source) relax_neighbours(i, j);
    }
  }
  double last = -kInf;
  f.order.reserve(g.size());
  while (!heap.empty()) {
    const auto [t, idx] = heap.top();
    heap.pop();
    if (f.status[idx] == NodeStatus::accepted || t != f.values[idx]) continue;
    f.status[idx] = NodeStatus::accepted;
    f.order.push_back(idx);
    if (t < last - 1e-12) ++f.monotonicity_violations;
    last = std::max(last, t);
    relax_neighbours(static_cast<int>(idx % static_cast<std::uint32_t>(g.nx)),
                     static_cast<int>(idx / static_cast<std::uint32_t>(g.nx)));
  }
  count_unreachable(f);
  return f;
}

DistanceField solve_anisotropic_graph(const Scene& scene, double h, const SolveOptions& opt) {
  const Stencil stencil = opt.stencil;
  const Metric& m = scene.metric();
  DistanceField f = make_field(scene, h, opt);
  f.solver = "graph";
  const Grid& g = f.grid;
  const Obstacle& obs = scene.obstacle();

  const std::size_t n_check = m.is_constant() ? 1 : g.size();
  for (std::size_t idx = 0; idx < n_check; ++idx) {
    if (m.anisotropy(g.point(idx)) > 10.0) {
      throw Error(ErrorCode::accuracy, "metric anisotropy ratio exceeds 10");
    }
  }

  std::vector<std::pair<int, int>> offs = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  if (stencil != Stencil::n4) {
    for (auto o : std::vector<std::pair<int, int>>{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}) offs.push_back(o);
  }
  if (stencil == Stencil::n16) {
    for (auto o : std::vector<std::pair<int, int>>{
             {1, 2}, {2, 1}, {-1, 2}, {-2, 1}, {1, -2}, {2, -1}, {-1, -2}, {-2, -1}}) {
      offs.push_back(o);
    }
  }

  auto edge_free = [&](Vec2 p, Vec2 q) {
    if (obs.empty()) return true;
    for (double t : {0.25, 0.5, 0.75}) {
      if (obs.phi(p + t * (q - p)) < 0.0) return false;
    }
    return true;
  };

  MinHeap heap;
  auto relax = [&](int i, int j) {
    const std::size_t idx = g.index(i, j);
    const Vec2 p = g.point(i, j);
    for (auto [oi, oj] : offs) {
      const int ni = i + oi;
      const int nj = j + oj;
      if (!g.valid(ni, nj)) continue;
      const std::size_t nidx = g.index(ni, nj);
      if (g.mask[nidx] == CellType::obstacle || f.status[nidx] == NodeStatus::accepted) continue;
      const Vec2 q = g.point(ni, nj);
      if (!edge_free(p, q)) continue;
      const double t = f.values[idx] + m.segment_length(p, q);
      if (t < f.values[nidx]) {
        f.values[nidx] = t;
        heap.emplace(t, static_cast<std::uint32_t>(nidx));
      }
    }
  };

  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (g.type(i, j) == CellType::source) relax(i, j);
    }
  }
  double last = -kInf;
  f.order.reserve(g.size());
  while (!heap.empty()) {
    const auto [t, idx] = heap.top();
    heap.pop();
    if (f.status[idx] == NodeStatus::accepted || t != f.values[idx]) continue;
    f.status[idx] = NodeStatus::accepted;
    f.order.push_back(idx);
    if (t < last - 1e-12) ++f.monotonicity_violations;
    last = std::max(last, t);
    relax(static_cast<int>(idx % static_cast<std::uint32_t>(g.nx)),
          static_cast<int>(idx / static_cast<std::uint32_t>(g.nx)));
  }
  count_unreachable(f);
  return f;
}

GradientEstimate nodal_gradient(const DistanceField& field, int i, int j) {
  if (!field.finite(i, j)) throw Error(ErrorCode::masked_stencil, "node has no finite value");
  const double v = field.at(i, j);
  const double h = field.grid.h;
  GradientEstimate out;
  int blocked_axes = 0;
  auto axis = [&](int i0, int j0, int i1, int j1) -> double {
    const bool f0 = field.finite(i0, j0);
    const bool f1 = field.finite(i1, j1);
    if (f0 && f1) {
      const double v0 = field.at(i0, j0);
      const double v1 = field.at(i1, j1);
      if (v0 <= v1) return v0 < v ? (v - v0) / h : 0.0;
      return v1 < v ? (v1 - v) / h : 0.0;
    }
    if (f0) {
      out.one_sided = true;
      return (v - field.at(i0, j0)) / h;
    }
    if (f1) {
      out.one_sided = true;
      return (field.at(i1, j1) - v) / h;
    }
    out.one_sided = true;
    ++blocked_axes;
    return 0.0;
  };
  out.g.x = axis(i - 1, j, i + 1, j);
  out.g.y = axis(i, j - 1, i, j + 1);
  if (blocked_axes == 2) throw Error(ErrorCode::masked_stencil, "stencil blocked on all sides");
  return out;
}

GradientEstimate numeric_gradient(const DistanceField& field, Vec2 x, double jump_deg) {
  int i, j;
  double fx, fy;
  if (!field.grid.locate(x, i, j, fx, fy)) throw Error(ErrorCode::domain, "point outside the grid");
  const int ci[4] = {i, i + 1, i, i + 1};
  const int cj[4] = {j, j, j + 1, j + 1};
  const double w[4] = {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy};
  GradientEstimate corner[4];
  bool usable[4] = {false, false, false, false};
  int n_usable = 0;
  for (int k = 0; k < 4; ++k) {
    if (!field.finite(ci[k], cj[k])) continue;
    try {
      corner[k] = nodal_gradient(field, ci[k], cj[k]);
      usable[k] = true;
      ++n_usable;
    } catch (const Error&) {
    }
  }
  if (n_usable == 0) throw Error(ErrorCode::masked_stencil, "no usable stencil around point");

  const double jump = deg_to_rad(jump_deg);
  bool disagree = false;
  for (int a = 0; a < 4 && !disagree; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      if (!usable[a] || !usable[b]) continue;
      if (norm(corner[a].g) > 0.0 && norm(corner[b].g) > 0.0 &&
          angle_between(corner[a].g, corner[b].g) > jump) {
        disagree = true;
        break;
      }
    }
  }
  GradientEstimate out;
  if (disagree) {
    int best = -1;
    double best_d = kInf;
    for (int k = 0; k < 4; ++k) {
      if (!usable[k]) continue;
      const double d = distance(x, field.grid.point(ci[k], cj[k]));
      if (d < best_d) {
        best_d = d;
        best = k;
      }
    }
    return corner[best];
  }
  double sw = 0.0;
  for (int k = 0; k < 4; ++k) {
    if (!usable[k]) continue;
    sw += w[k];
    out.g += w[k] * corner[k].g;
    out.one_sided = out.one_sided || corner[k].one_sided;
  }
  if (sw > 0.0) {
    out.g = out.g / sw;
  } else {
    for (int k = 0; k < 4; ++k) {
      if (usable[k]) return corner[k];
    }
  }
  return out;
}

double sample_extrapolated(const DistanceField& field, Vec2 x) {
  int i, j;
  double fx, fy;
  if (!field.grid.locate(x, i, j, fx, fy)) return kInf;
  const int ci[4] = {i, i + 1, i, i + 1};
  const int cj[4] = {j, j, j + 1, j + 1};
  const double w[4] = {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy};
  bool all = true;
  for (int k = 0; k < 4; ++k) all = all && field.finite(ci[k], cj[k]);
  if (all) return field.sample(x);
  double sw = 0.0, sv = 0.0;
  for (int k = 0; k < 4; ++k) {
    if (!field.finite(ci[k], cj[k])) continue;
    Vec2 g{};
    try {
      g = nodal_gradient(field, ci[k], cj[k]).g;
    } catch (const Error&) {
      continue;
    }
    // A corner sitting on x carries weight even when its bilinear weight is tiny.
    const double wk = std::max(w[k], 1e-12);
    sw += wk;
    sv += wk * (field.at(ci[k], cj[k]) + dot(g, x - field.grid.point(ci[k], cj[k])));
  }
  return sw > 0.0 ? sv / sw : kInf;
}

double percentile(std::vector<double> v, double q) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double t = pos - static_cast<double>(lo);
  return v[lo] + t * (v[hi] - v[lo]);
}

ResidualStats eikonal_residual(const DistanceField& field, const Metric& metric,
                               const std::vector<std::uint8_t>& exclusion) {
  const Grid& g = field.grid;
  std::vector<double> r;
  r.reserve(g.size());
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t idx = g.index(i, j);
      if (!exclusion.empty() && exclusion[idx]) continue;
      if (g.mask[idx] != CellType::free || !std::isfinite(field.values[idx])) continue;
      GradientEstimate ge;
      try {
        ge = nodal_gradient(field, i, j);
      } catch (const Error&) {
        continue;
      }
      r.push_back(std::abs(metric.dual_norm2(g.point(i, j), ge.g) - 1.0));
    }
  }
  ResidualStats s;
  s.count = r.size();
  if (r.empty()) return s;
  s.median = percentile(r, 0.5);
  s.p95 = percentile(r, 0.95);
  s.max = *std::max_element(r.begin(), r.end());
  return s;
}

std::vector<std::uint8_t> residual_exclusion(const DistanceField& field, const Scene& scene,
                                             const std::vector<std::uint8_t>& singular_mask,
                                             const Thresholds& th) {
  const Grid& g = field.grid;
  const double h = g.h;
  std::vector<std::uint8_t> ex(g.size(), 0);
  const Obstacle& o = scene.obstacle();
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t idx = g.index(i, j);
      const Vec2 p = g.point(i, j);
      if (distance(p, field.k0) <= field.init_radius + 2.0 * h) ex[idx] = 1;
      if (!o.empty() && o.signed_distance(p) < th.residual_collar_cells * h) ex[idx] = 1;
    }
  }
  if (!singular_mask.empty()) {
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        if (!singular_mask[g.index(i, j)]) continue;
        for (int dj = -1; dj <= 1; ++dj) {
          for (int di = -1; di <= 1; ++di) {
            if (g.valid(i + di, j + dj)) ex[g.index(i + di, j + dj)] = 1;
          }
        }
      }
    }
  }
  return ex;
}

}  // namespace odl
