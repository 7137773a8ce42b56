#include "odl/minimizer.hpp"

#include <cmath>

#include "odl/eikonal.hpp"
#include "odl/errors.hpp"

namespace odl {

double path_length(const std::vector<Vec2>& points, const Metric& metric) {
  double s = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) s += metric.segment_length(points[i - 1], points[i]);
  return s;
}

double path_length(const MinimizerPath& path, const Metric& metric) {
  return path_length(path.points, metric);
}

std::vector<std::pair<std::size_t, std::size_t>> find_contact_intervals(const Scene& scene,
                                                                       const std::vector<Vec2>& points,
                                                                       double collar) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const Obstacle& o = scene.obstacle();
  if (o.empty()) return out;
  bool open = false;
  std::size_t first = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const bool in = o.signed_distance(points[i]) <= collar;
    if (in && !open) {
      open = true;
      first = i;
    } else if (!in && open) {
      open = false;
      out.emplace_back(first, i - 1);
    }
  }
  if (open) out.emplace_back(first, points.size() - 1);
  return out;
}

std::vector<std::pair<std::size_t, std::size_t>> slide_intervals(const Scene& scene,
                                                                const std::vector<Vec2>& points,
                                                                const std::vector<std::uint8_t>& slid,
                                                                double collar) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  const Obstacle& o = scene.obstacle();
  const std::size_t n = std::min(points.size(), slid.size());
  std::size_t i = 0;
  while (i < n) {
    if (!slid[i]) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && slid[j + 1]) ++j;
    if (!out.empty()) {
      bool close = true;
      for (std::size_t k = out.back().second + 1; k < i && close; ++k) {
        close = o.signed_distance(points[k]) <= collar;
      }
      if (close) {
        out.back().second = j;
        i = j + 1;
        continue;
      }
    }
    out.emplace_back(i, j);
    i = j + 1;
  }
  return out;
}

double contact_normal_component(const Scene& scene, const MinimizerPath& path) {
  double worst = 0.0;
  const Obstacle& o = scene.obstacle();
  const auto& p = path.points;
  for (auto [a, b] : path.contact_intervals) {
    for (std::size_t i = std::max<std::size_t>(a, 1); i <= b && i + 1 < p.size(); ++i) {
      const Vec2 v = p[i + 1] - p[i - 1];
      if (norm(v) == 0.0) continue;
      const Vec2 nu = o.normal_at(o.project(p[i]));
      worst = std::max(worst, std::abs(dot(normalized(v), nu)));
    }
  }
  return worst;
}

MinimizerPath backtrace_minimizer(const DistanceField& field, const Scene& scene, Vec2 x,
                                  const TraceOptions& opt) {
  const Obstacle& obs = scene.obstacle();
  const Metric& metric = scene.metric();
  const double h = field.grid.h;
  const double step_len = opt.step_cells * h;
  if (!scene.bbox().contains(x)) throw Error(ErrorCode::domain, "trace start outside the bbox");
  if (!obs.empty() && obs.signed_distance(x) < -obs.proj_tol()) {
    throw Error(ErrorCode::precondition, "trace start inside the obstacle");
  }
  if (!std::isfinite(field.sample_available(x))) {
    throw Error(ErrorCode::precondition, "trace start has no finite distance value");
  }

  MinimizerPath path;
  path.points.push_back(x);
  std::vector<std::uint8_t> slid{0};
  Vec2 pos = x;
  double travelled = 0.0;
  int stagnant = 0;
  const Box b = scene.bbox();
  const auto max_steps = static_cast<std::size_t>(std::ceil(8.0 * (b.width() + b.height()) / step_len));
  for (std::size_t it = 0; it < max_steps; ++it) {
    if (distance(pos, field.k0) <= field.init_radius) {
      path.points.push_back(field.k0);
      path.reached_target = true;
      break;
    }
    if (travelled >= opt.max_length) break;
    const GradientEstimate ge = numeric_gradient(field, pos, opt.jump_deg);
    Vec2 dir = metric.is_isotropic() ? ge.g : metric.A_inv(pos) * ge.g;
    Vec2 step{};
    if (norm(dir) > 0.0) step = -step_len * normalized(dir);
    Vec2 q = pos + step;
    const bool deflected = !obs.empty() && obs.phi(q) < 0.0;
    if (deflected) {
      ++path.slides;
      const Vec2 nu = obs.normal_at(obs.project(q));
      const double inward = dot(step, nu);
      if (inward < 0.0) step -= inward * nu;
      q = pos + step;
      if (obs.phi(q) < 0.0) q = obs.project(q);
    }
    if (!b.contains(q)) throw Error(ErrorCode::domain, "trace left the bbox");
    const double moved = distance(q, pos);
    if (moved < 1e-3 * h) {
      if (++stagnant >= opt.stagnation_steps) {
        throw Error(ErrorCode::trapped_trace, "trace stagnated (likely a singular point)");
      }
    } else {
      stagnant = 0;
    }
    travelled += moved;
    pos = q;
    path.points.push_back(pos);
    slid.push_back(deflected ? 1 : 0);
  }
  if (!path.reached_target && travelled < opt.max_length) {
    throw Error(ErrorCode::no_convergence, "trace did not reach the source ball");
  }

  path.tau = path_length(path, metric);
  const std::size_t n_body = path.reached_target ? path.points.size() - 1 : path.points.size();
  slid.resize(n_body);
  path.contact_intervals = slide_intervals(scene, path.points, slid, opt.contact_collar_cells * h);
  for (std::size_t i = 1; i + 1 < n_body; ++i) {
    const Vec2 a = path.points[i] - path.points[i - 1];
    const Vec2 c = path.points[i + 1] - path.points[i];
    const double la = norm(a), lc = norm(c);
    if (la <= 0.0 || lc <= 0.0) continue;
    path.max_curvature = std::max(path.max_curvature, angle_between(a, c) / (0.5 * (la + lc)));
  }
  return path;
}

}  // namespace odl
