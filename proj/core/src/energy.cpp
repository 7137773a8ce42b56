#include "odl/energy.hpp"

#include <cmath>

#include "odl/errors.hpp"

namespace odl {
namespace {

double segment_energy(const Metric& m, Vec2 p, Vec2 q) {
  const Vec2 d = q - p;
  return m.A(0.5 * (p + q)).quad(d);
}

void project_knots(const Obstacle& o, std::vector<Vec2>& knots) {
  if (o.empty()) return;
  for (std::size_t i = 1; i + 1 < knots.size(); ++i) {
    if (o.phi(knots[i]) < 0.0) knots[i] = o.project(knots[i]);
  }
}

std::vector<Vec2> energy_gradient(const Metric& m, const std::vector<Vec2>& k) {
  const std::size_t n_seg = k.size() - 1;
  const double N = static_cast<double>(n_seg);
  std::vector<Vec2> g(k.size());
  if (m.is_constant()) {
    const Mat2 a = m.A({});
    for (std::size_t i = 1; i < n_seg; ++i) {
      g[i] = 2.0 * N * (a * (k[i] - k[i - 1]) - a * (k[i + 1] - k[i]));
    }
    return g;
  }
  // Only the two segments touching knot i depend on it.
  for (std::size_t i = 1; i < n_seg; ++i) {
    const double eps = 1e-7 * std::max(1.0, norm(k[i]));
    auto local = [&](Vec2 p) { return N * (segment_energy(m, k[i - 1], p) + segment_energy(m, p, k[i + 1])); };
    g[i].x = (local(k[i] + Vec2{eps, 0.0}) - local(k[i] - Vec2{eps, 0.0})) / (2.0 * eps);
    g[i].y = (local(k[i] + Vec2{0.0, eps}) - local(k[i] - Vec2{0.0, eps})) / (2.0 * eps);
  }
  return g;
}

}  // namespace

double path_energy(const std::vector<Vec2>& knots, const Metric& metric) {
  if (knots.size() < 2) return 0.0;
  const double N = static_cast<double>(knots.size() - 1);
  double s = 0.0;
  for (std::size_t i = 1; i < knots.size(); ++i) s += segment_energy(metric, knots[i - 1], knots[i]);
  return N * s;
}

EnergyResult minimize_energy(const Scene& scene, Vec2 x, int n_knots, const EnergyOptions& opt) {
  if (n_knots < 16) throw Error(ErrorCode::precondition, "energy descent needs at least 16 knots");
  const Obstacle& o = scene.obstacle();
  const Metric& m = scene.metric();
  if (!o.empty() && o.phi(x) < 0.0) throw Error(ErrorCode::precondition, "start inside the obstacle");
  const Vec2 k0 = scene.k0();
  const std::size_t n = static_cast<std::size_t>(n_knots);
  const double N = static_cast<double>(n - 1);

  std::vector<Vec2> k(n);
  const Vec2 lateral = perp(k0 - x);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / N;
    k[i] = x + t * (k0 - x) + (opt.bump * std::sin(kPi * t)) * lateral;
  }
  k.front() = x;
  k.back() = k0;
  project_knots(o, k);

  double lam_max = 1.0;
  for (const Vec2& p : k) lam_max = std::max(lam_max, m.A(p).eigenvalues()[1]);
  double eta = 1.0 / (4.0 * N * lam_max);

  EnergyResult res;
  double E = path_energy(k, m);
  std::vector<double> history{E};
  std::vector<Vec2> trial(n);
  for (int it = 0; it < opt.max_iters; ++it) {
    const std::vector<Vec2> g = energy_gradient(m, k);
    bool accepted = false;
    for (int tries = 0; tries < 60; ++tries) {
      trial = k;
      for (std::size_t i = 1; i + 1 < n; ++i) trial[i] -= eta * g[i];
      project_knots(o, trial);
      const double Et = path_energy(trial, m);
      if (Et <= E) {
        k.swap(trial);
        E = Et;
        accepted = true;
        eta *= 1.1;
        break;
      }
      ++res.rejected_steps;
      eta *= 0.5;
    }
    res.iterations = it + 1;
    if (!accepted) {
      // No descent direction left at machine precision: treat as stationary.
      res.converged = true;
      break;
    }
    history.push_back(E);
    const std::size_t w = static_cast<std::size_t>(opt.window);
    if (history.size() > w) {
      const double before = history[history.size() - 1 - w];
      if (before - E <= opt.rel_tol * std::max(E, 1e-300)) {
        res.converged = true;
        break;
      }
    }
  }

  res.E_value = E;
  res.path.points = k;
  res.path.tau = path_length(k, m);
  res.path.reached_target = true;
  double mean = 0.0, mx = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    const double l = m.segment_length(k[i - 1], k[i]);
    mean += l;
    mx = std::max(mx, l);
  }
  mean /= N;
  res.speed_defect = mean > 0.0 ? mx / mean - 1.0 : 0.0;
  return res;
}

EnergyCheck energy_distance_check(const Scene& scene, const DistanceField& field,
                                  const std::vector<Vec2>& samples, int n_knots,
                                  double exclusion_radius, const EnergyOptions& opt) {
  EnergyCheck out;
  const Obstacle& o = scene.obstacle();
  for (const Vec2& x : samples) {
    EnergyCheckRow row;
    row.x = x;
    if (distance(x, scene.k0()) < exclusion_radius) {
      row.skipped = true;
      row.reason = "near_target";
    } else if (!o.empty() && o.phi(x) < 0.0) {
      row.skipped = true;
      row.reason = "inside_obstacle";
    } else {
      row.d_field = field.sample_available(x);
      if (!std::isfinite(row.d_field)) {
        row.skipped = true;
        row.reason = "unreachable";
      }
    }
    if (!row.skipped) {
      const EnergyResult er = minimize_energy(scene, x, n_knots, opt);
      row.sqrt_E = std::sqrt(er.E_value);
      row.rel_gap = std::abs(row.sqrt_E - row.d_field) / row.d_field;
      out.max_rel_gap = std::max(out.max_rel_gap, row.rel_gap);
      ++out.evaluated;
    }
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace odl
