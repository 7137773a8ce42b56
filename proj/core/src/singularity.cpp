#include "odl/singularity.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "odl/eikonal.hpp"
#include "odl/errors.hpp"
#include "odl/minimizer.hpp"

namespace odl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Rescales a covector so that <A^{-1} p, p> = 1.
Vec2 unit_dual(const Metric& m, Vec2 x, Vec2 p) {
  const double n2 = m.dual_norm2(x, p);
  return n2 > 0.0 ? p / std::sqrt(n2) : p;
}

bool near_corner(const Obstacle& o, Vec2 x, double r) {
  for (const Vec2& c : o.corners()) {
    if (distance(c, x) < r) return true;
  }
  return false;
}

}  // namespace

std::vector<Vec2> cluster_directions(const std::vector<Vec2>& dirs, double cluster_deg) {
  std::vector<Vec2> out;
  if (dirs.empty()) return out;
  std::vector<double> ang;
  ang.reserve(dirs.size());
  for (const Vec2& d : dirs) ang.push_back(canonical_angle(std::atan2(d.y, d.x)));
  std::sort(ang.begin(), ang.end());
  const double gap_max = deg_to_rad(cluster_deg);
  const std::size_t n = ang.size();

  // Clusters start after every gap wider than the threshold, wrap included.
  std::vector<std::size_t> starts;
  for (std::size_t i = 0; i < n; ++i) {
    const double prev = i == 0 ? ang[n - 1] - 2.0 * kPi : ang[i - 1];
    if (ang[i] - prev > gap_max) starts.push_back(i);
  }
  if (starts.empty()) {
    Vec2 s{};
    for (double a : ang) s += unit_at_angle(a);
    out.push_back(norm(s) > 0.0 ? normalized(s) : unit_at_angle(ang[0]));
    return out;
  }
  for (std::size_t c = 0; c < starts.size(); ++c) {
    const std::size_t a = starts[c];
    const std::size_t b = c + 1 < starts.size() ? starts[c + 1] : starts[0] + n;
    Vec2 s{};
    for (std::size_t k = a; k < b; ++k) s += unit_at_angle(ang[k % n]);
    out.push_back(normalized(s));
  }
  std::sort(out.begin(), out.end(), [](Vec2 u, Vec2 v) {
    return canonical_angle(std::atan2(u.y, u.x)) < canonical_angle(std::atan2(v.y, v.x));
  });
  return out;
}

GradientSet reachable_gradients_numeric(const DistanceField& field, const Scene& scene, Vec2 x,
                                        const Thresholds& th) {
  const double h = field.grid.h;
  const Obstacle& obs = scene.obstacle();
  const Metric& metric = scene.metric();
  const Box b = scene.bbox();
  const double r = th.probe_offset_cells * h;
  if (!b.contains(x)) throw Error(ErrorCode::domain, "point outside the bbox");
  if (distance(x, field.k0) <= field.init_radius + r) {
    throw Error(ErrorCode::precondition, "point inside the source ball");
  }
  const double sd = obs.empty() ? kInf : obs.signed_distance(x);
  if (sd < -th.boundary_snap_cells * h) throw Error(ErrorCode::precondition, "point inside the obstacle");

  GradientSet gs;
  gs.boundary_mode = std::abs(sd) < th.boundary_snap_cells * h;
  const Vec2 base = gs.boundary_mode ? obs.project(x) : x;

  TraceOptions opt;
  opt.max_length = th.probe_length_cells * h;
  opt.jump_deg = th.jump_deg;

  const int n = std::max(1, static_cast<int>(th.n_starts));
  std::vector<Vec2> dirs;
  for (int k = 0; k < n; ++k) {
    Vec2 s = base + r * unit_at_angle(2.0 * kPi * k / n);
    if (!obs.empty() && obs.phi(s) < 0.0) {
      if (!gs.boundary_mode) continue;
      s = obs.project(s);
    }
    if (!b.contains(s) || distance(s, field.k0) <= field.init_radius) continue;
    ++gs.traces;
    try {
      const MinimizerPath path = backtrace_minimizer(field, scene, s, opt);
      const Vec2 chord = path.points.back() - path.points.front();
      if (norm(chord) < 0.5 * h) {
        ++gs.failed_traces;
        continue;
      }
      // The trace follows -A^{-1} grad d, so grad d is parallel to -A v.
      const Vec2 v = normalized(chord);
      dirs.push_back(normalized(metric.A(x) * (-1.0 * v)));
    } catch (const Error&) {
      ++gs.failed_traces;
    }
  }
  if (dirs.empty()) throw Error(ErrorCode::degenerate_point, "no probe trace succeeded");

  for (const Vec2& d : cluster_directions(dirs, th.cluster_deg)) gs.reachables.push_back(unit_dual(metric, x, d));
  gs.hull = ConvexHull2D::from_points(gs.reachables);
  gs.min_norm_point = min_norm_point(gs.reachables);
  gs.is_singular = gs.reachables.size() >= 2;
  return gs;
}

SingularDetection detect_singular_set(const DistanceField& field, const Scene& scene, const Thresholds& th) {
  const Grid& g = field.grid;
  const double h = g.h;
  const Obstacle& obs = scene.obstacle();
  const std::size_t n = g.size();
  SingularDetection out;
  out.candidates.assign(n, 0);
  out.confirmed.assign(n, 0);

  std::vector<Vec2> grad(n, Vec2{kInf, kInf});
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (g.type(i, j) != CellType::free || !field.finite(i, j)) continue;
      try {
        const Vec2 v = nodal_gradient(field, i, j).g;
        if (norm(v) > 0.0) grad[g.index(i, j)] = v;
      } catch (const Error&) {
      }
    }
  }

  const double jump = deg_to_rad(th.jump_deg);
  const double src_r = th.source_exclusion_cells * h;
  const double corner_r = th.corner_exclusion_cells * h;
  const int di[4] = {1, -1, 0, 0};
  const int dj[4] = {0, 0, 1, -1};
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t idx = g.index(i, j);
      if (!std::isfinite(grad[idx].x)) continue;
      const Vec2 x = g.point(i, j);
      if (distance(x, field.k0) < src_r || near_corner(obs, x, corner_r)) continue;
      bool flag = false;
      for (int k = 0; k < 4 && !flag; ++k) {
        const int a = i + di[k], c = j + dj[k];
        if (!g.valid(a, c)) continue;
        const Vec2 w = grad[g.index(a, c)];
        if (std::isfinite(w.x) && angle_between(grad[idx], w) > jump) flag = true;
      }
      if (!flag) continue;
      out.candidates[idx] = 1;
      ++out.n_candidates;
      try {
        if (reachable_gradients_numeric(field, scene, x, th).is_singular) {
          out.confirmed[idx] = 1;
          ++out.n_confirmed;
        }
      } catch (const Error&) {
      }
    }
  }
  return out;
}

SingularArc integrate_singular_flow(const DistanceField& field, const Scene& scene, Vec2 x0, double t_max,
                                    const Thresholds& th) {
  const double h = field.grid.h;
  const Obstacle& obs = scene.obstacle();
  const Box b = scene.bbox();
  SingularArc arc;
  arc.seed = x0;
  Vec2 x = x0;
  if (!obs.empty() && std::abs(obs.signed_distance(x0)) <= th.boundary_snap_cells * h) {
    const Vec2 bp = obs.project(x0);
    x = bp + h * obs.normal_at(bp);
    arc.boundary_seeded = true;
  }
  ConvexHull2D hull;
  if (!obs.empty()) hull = convex_hull_2d(scene, 1024);

  double t = 0.0;
  int lost = 0;
  for (;;) {
    if (t > t_max + 1e-12) {
      arc.stop_reason = "t_max";
      break;
    }
    if (b.inner_margin(x) < 3.0 * h) {
      arc.stop_reason = "bbox_exit";
      break;
    }
    GradientSet gs;
    try {
      gs = reachable_gradients_numeric(field, scene, x, th);
    } catch (const Error& e) {
      arc.stop_reason = std::string("error: ") + e.what();
      break;
    }
    ArcSample s;
    s.t = t;
    s.x = x;
    s.d = field.sample_available(x);
    s.hull_dist = obs.empty() ? 0.0 : hull.distance(x);
    s.p_norm = norm(gs.min_norm_point);
    s.singular = gs.is_singular;
    arc.samples.push_back(s);

    lost = s.singular ? 0 : lost + 1;
    if (lost > 3) {
      arc.flagged = true;
      arc.stop_reason = "lost_singularity";
      break;
    }
    if (s.p_norm < th.p_eps && !obs.empty() && hull.contains(x, 1e-12)) {
      arc.stop_reason = "critical";
      break;
    }
    x += h * gs.min_norm_point;
    t += h;
  }
  return arc;
}

HullSearch hull_singularity_search(const DistanceField& field, const Scene& scene,
                                   const std::vector<std::uint8_t>& confirmed, const Thresholds& th) {
  const Obstacle& obs = scene.obstacle();
  if (obs.empty()) throw Error(ErrorCode::precondition, "hull search needs an obstacle");
  const Grid& g = field.grid;
  const double h = g.h;
  const ConvexHull2D hull = convex_hull_2d(scene, 1024);
  const int reach = static_cast<int>(std::ceil(th.hull_hit_cells));
  HullSearch out;
  out.max_d = -kInf;
  for (const Vec2& p : hull.boundary_samples(h)) {
    const double d = field.sample_available(p);
    if (std::isfinite(d) && d > out.max_d) {
      out.max_d = d;
      out.argmax = p;
    }
    int ci = 0, cj = 0;
    g.nearest(p, ci, cj);
    bool hit = false;
    for (int dj = -reach; dj <= reach && !hit; ++dj) {
      for (int di = -reach; di <= reach && !hit; ++di) {
        const int i = ci + di, j = cj + dj;
        if (!g.valid(i, j) || !confirmed[g.index(i, j)]) continue;
        hit = distance(g.point(i, j), p) <= th.hull_hit_cells * h;
      }
    }
    if (hit) out.hits.push_back(p);
  }
  return out;
}

std::vector<Vec2> boundary_singular_points(const DistanceField& field, const Scene& scene,
                                           const std::vector<std::uint8_t>& confirmed, const Thresholds& th) {
  const Obstacle& obs = scene.obstacle();
  std::vector<Vec2> out;
  if (obs.empty()) return out;
  const Grid& g = field.grid;
  const double band = th.boundary_band_cells * g.h;
  std::vector<std::uint8_t> near(g.size(), 0), seen(g.size(), 0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (confirmed[k] && obs.signed_distance(g.point(k)) < band) near[k] = 1;
  }
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!near[k] || seen[k]) continue;
    std::deque<std::size_t> q{k};
    seen[k] = 1;
    std::size_t best = k;
    double best_sd = kInf;
    while (!q.empty()) {
      const std::size_t c = q.front();
      q.pop_front();
      const double sd = std::abs(obs.signed_distance(g.point(c)));
      if (sd < best_sd) {
        best_sd = sd;
        best = c;
      }
      const int ci = static_cast<int>(c % static_cast<std::size_t>(g.nx));
      const int cj = static_cast<int>(c / static_cast<std::size_t>(g.nx));
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          const int i = ci + di, j = cj + dj;
          if (!g.valid(i, j)) continue;
          const std::size_t nb = g.index(i, j);
          if (near[nb] && !seen[nb]) {
            seen[nb] = 1;
            q.push_back(nb);
          }
        }
      }
    }
    out.push_back(obs.project(g.point(best)));
  }
  return out;
}

PropagationProbe local_propagation_probe(const DistanceField& field, const Scene& scene,
                                         const std::vector<std::uint8_t>& confirmed, Vec2 x0, double radius,
                                         const Thresholds& th) {
  const Grid& g = field.grid;
  const double h = g.h;
  const Obstacle& obs = scene.obstacle();
  PropagationProbe out;
  out.x0 = x0;
  out.radius = radius;

  int ci = 0, cj = 0;
  g.nearest(x0, ci, cj);
  const int w = static_cast<int>(std::ceil(radius / h)) + 1;
  std::vector<std::size_t> seeds;
  for (int dj = -w; dj <= w; ++dj) {
    for (int di = -w; di <= w; ++di) {
      const int i = ci + di, j = cj + dj;
      if (!g.valid(i, j) || !confirmed[g.index(i, j)]) continue;
      const double r = distance(g.point(i, j), x0);
      if (r <= th.boundary_band_cells * h) seeds.push_back(g.index(i, j));
      if (r > h && r < radius) ++out.annulus_count;
    }
  }
  if (seeds.empty()) throw Error(ErrorCode::precondition, "no singular node next to the probe point");
  if (out.annulus_count == 0) throw Error(ErrorCode::accuracy, "no singular node in the probe annulus");

  std::vector<std::uint8_t> seen(g.size(), 0);
  std::deque<std::size_t> q(seeds.begin(), seeds.end());
  for (std::size_t s : seeds) seen[s] = 1;
  while (!q.empty()) {
    const std::size_t c = q.front();
    q.pop_front();
    const Vec2 p = g.point(c);
    out.chain.push_back(p);
    out.chain_extent = std::max(out.chain_extent, distance(p, x0));
    if (!obs.empty() && obs.phi(p) < 0.0) out.chain_outside_obstacle = false;
    const int pi = static_cast<int>(c % static_cast<std::size_t>(g.nx));
    const int pj = static_cast<int>(c / static_cast<std::size_t>(g.nx));
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        const int i = pi + di, j = pj + dj;
        if (!g.valid(i, j)) continue;
        const std::size_t nb = g.index(i, j);
        if (!confirmed[nb] || seen[nb] || distance(g.point(nb), x0) >= radius) continue;
        seen[nb] = 1;
        q.push_back(nb);
      }
    }
  }
  out.leaves_x0 = out.chain_extent >= 0.5 * radius;
  return out;
}

}  // namespace odl
