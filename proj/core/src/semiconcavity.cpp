#include "odl/semiconcavity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "odl/eikonal.hpp"
#include "odl/errors.hpp"
#include "odl/random.hpp"

namespace odl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::array<double, 3> kLambdas = {0.25, 0.5, 0.75};

// Two-pass chamfer distance (in cells) to the nearest marked node.
std::vector<double> chamfer(const Grid& g, const std::vector<std::uint8_t>& mask) {
  std::vector<double> d(g.size(), kInf);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (mask[k]) d[k] = 0.0;
  }
  const double diag = std::sqrt(2.0);
  auto relax = [&](int i, int j, int di, int dj, double w) {
    if (!g.valid(i + di, j + dj)) return;
    double& here = d[g.index(i, j)];
    here = std::min(here, d[g.index(i + di, j + dj)] + w);
  };
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      relax(i, j, -1, 0, 1.0);
      relax(i, j, 0, -1, 1.0);
      relax(i, j, -1, -1, diag);
      relax(i, j, 1, -1, diag);
    }
  }
  for (int j = g.ny - 1; j >= 0; --j) {
    for (int i = g.nx - 1; i >= 0; --i) {
      relax(i, j, 1, 0, 1.0);
      relax(i, j, 0, 1, 1.0);
      relax(i, j, 1, 1, diag);
      relax(i, j, -1, 1, diag);
    }
  }
  return d;
}

// Largest of defect / (lambda (1 - lambda)) over the lambda sweep.
double envelope_value(const FieldView& view, Vec2 x, Vec2 y) {
  double e = -kInf;
  for (double lam : kLambdas) e = std::max(e, sc_defect(view, x, y, lam).defect / (lam * (1.0 - lam)));
  return e;
}

double log_uniform(Rng& rng, double lo, double hi) { return std::exp(rng.uniform(std::log(lo), std::log(hi))); }

struct Envelope {
  std::vector<double> s;
  std::vector<double> e;
};

// Per log-spaced bin, the medians of the separations and of the positive
// envelope values. Bins with fewer than 4 positive values are dropped.
Envelope bin_medians(const std::vector<double>& seps, const std::vector<double>& vals, double s_min, double s_max,
                     int n_bins) {
  std::vector<std::vector<double>> bs(static_cast<std::size_t>(n_bins)), be(static_cast<std::size_t>(n_bins));
  const double l0 = std::log(s_min), l1 = std::log(s_max);
  for (std::size_t k = 0; k < seps.size(); ++k) {
    if (!(vals[k] > 0.0)) continue;
    const double f = (std::log(seps[k]) - l0) / (l1 - l0);
    const auto b = static_cast<std::size_t>(std::clamp(static_cast<int>(f * n_bins), 0, n_bins - 1));
    bs[b].push_back(seps[k]);
    be[b].push_back(vals[k]);
  }
  Envelope env;
  for (std::size_t b = 0; b < bs.size(); ++b) {
    if (bs[b].size() < 4) continue;
    env.s.push_back(percentile(bs[b], 0.5));
    env.e.push_back(percentile(be[b], 0.5));
  }
  return env;
}

}  // namespace

FieldView FieldView::grid(const DistanceField& field, const Scene& scene) {
  FieldView v;
  v.kind_ = Kind::grid;
  v.field_ = &field;
  v.obstacle_ = scene.obstacle();
  v.has_k0_ = true;
  v.k0_ = field.k0;
  v.source_radius_ = field.init_radius;
  return v;
}

FieldView FieldView::oracle(const DiskScene& ds) {
  ds.validate();
  FieldView v;
  v.kind_ = Kind::oracle;
  v.disk_ = ds;
  v.obstacle_ = Obstacle::disk(ds.center, ds.R);
  v.has_k0_ = true;
  v.k0_ = ds.k0;
  return v;
}

FieldView FieldView::synthetic(std::function<double(Vec2)> fn) {
  FieldView v;
  v.kind_ = Kind::synthetic;
  v.fn_ = std::move(fn);
  return v;
}

FieldView FieldView::scaled(double s) const {
  if (!(s > 0.0)) throw Error(ErrorCode::precondition, "field scale must be positive");
  FieldView v = *this;
  v.scale_ *= s;
  return v;
}

FieldView FieldView::with_singular_mask(std::vector<std::uint8_t> mask) const {
  if (kind_ != Kind::grid) throw Error(ErrorCode::unsupported, "singular masks apply to grid views");
  if (mask.size() != field_->grid.size()) throw Error(ErrorCode::precondition, "mask size does not match the grid");
  FieldView v = *this;
  v.singular_ = chamfer(field_->grid, mask);
  return v;
}

double FieldView::resolution() const { return kind_ == Kind::grid ? field_->grid.h : 0.0; }

double FieldView::value(Vec2 x) const {
  double v = kInf;
  switch (kind_) {
    case Kind::grid: v = sample_extrapolated(*field_, x); break;
    case Kind::oracle: v = disk_distance(disk_, x); break;
    case Kind::synthetic: v = fn_(x); break;
  }
  if (!std::isfinite(v)) throw Error(ErrorCode::domain, "field has no finite value here");
  return scale_ * v;
}

double FieldView::segment_clearance(Vec2 x, Vec2 y) const {
  if (obstacle_.empty()) return kInf;
  const double len = distance(x, y);
  const double step = kind_ == Kind::grid ? 0.25 * field_->grid.h : std::max(1e-6, len / 256.0);
  const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
  double c = kInf;
  for (int k = 0; k <= n; ++k) c = std::min(c, obstacle_.signed_distance(x + (static_cast<double>(k) / n) * (y - x)));
  return c;
}

bool FieldView::segment_free(Vec2 x, Vec2 y) const {
  if (segment_clearance(x, y) < -obstacle_.proj_tol()) return false;
  if (kind_ != Kind::grid) return true;
  const double len = distance(x, y);
  const int n = std::max(1, static_cast<int>(std::ceil(len / (0.25 * field_->grid.h))));
  for (int k = 0; k <= n; ++k) {
    if (!std::isfinite(sample_extrapolated(*field_, x + (static_cast<double>(k) / n) * (y - x)))) return false;
  }
  return true;
}

bool FieldView::segment_near_singular(Vec2 x, Vec2 y, double r) const {
  const double len = distance(x, y);
  if (kind_ == Kind::oracle) {
    const Vec2 w = disk_shadow_axis(disk_);
    const int n = std::max(1, static_cast<int>(std::ceil(len / std::max(1e-6, 0.25 * r))));
    for (int k = 0; k <= n; ++k) {
      const Vec2 p = x + (static_cast<double>(k) / n) * (y - x) - disk_.center;
      const double t = std::max(disk_.R, dot(p, w));
      if (distance(p, t * w) <= r) return true;
    }
    return false;
  }
  if (kind_ != Kind::grid || singular_.empty()) return false;
  const Grid& g = field_->grid;
  const int n = std::max(1, static_cast<int>(std::ceil(len / (0.5 * g.h))));
  for (int k = 0; k <= n; ++k) {
    int i = 0, j = 0;
    g.nearest(x + (static_cast<double>(k) / n) * (y - x), i, j);
    if (singular_[g.index(i, j)] * g.h <= r) return true;
  }
  return false;
}

DefectSample sc_defect(const FieldView& view, Vec2 x, Vec2 y, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw Error(ErrorCode::precondition, "lambda must lie in [0, 1]");
  if (view.has_source() &&
      (distance(x, view.k0()) <= view.source_radius() || distance(y, view.k0()) <= view.source_radius())) {
    throw Error(ErrorCode::precondition, "segment endpoint inside the source ball");
  }
  if (!view.segment_free(x, y)) throw Error(ErrorCode::precondition, "segment crosses the obstacle");
  DefectSample s;
  s.x = x;
  s.y = y;
  s.lambda = lambda;
  s.separation = distance(x, y);
  const Vec2 m = lambda * x + (1.0 - lambda) * y;
  s.defect = lambda * view.value(x) + (1.0 - lambda) * view.value(y) - view.value(m);
  return s;
}

const char* to_string(FitRegion r) {
  switch (r) {
    case FitRegion::interior: return "interior";
    case FitRegion::boundary_S: return "boundary_S";
    case FitRegion::boundary_I: return "boundary_I";
  }
  return "?";
}

FitRegion fit_region_from_string(const std::string& s) {
  if (s == "interior") return FitRegion::interior;
  if (s == "boundary_S") return FitRegion::boundary_S;
  if (s == "boundary_I") return FitRegion::boundary_I;
  throw Error(ErrorCode::parse, "unknown fit region '" + s + "'");
}

LogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) throw Error(ErrorCode::precondition, "log-log fit needs two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double a = std::log(x[k]), b = std::log(y[k]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
    syy += b * b;
  }
  const double N = static_cast<double>(n);
  const double vx = sxx - sx * sx / N, vy = syy - sy * sy / N, cxy = sxy - sx * sy / N;
  if (!(vx > 0.0)) throw Error(ErrorCode::precondition, "log-log fit needs distinct abscissae");
  LogFit f;
  f.slope = cxy / vx;
  f.intercept = (sy - f.slope * sx) / N;
  f.r2 = vy > 0.0 ? (cxy * cxy) / (vx * vy) : 1.0;
  return f;
}

ExponentFit fit_exponent(const FieldView& view, const Scene& scene, FitRegion region, const Thresholds& th,
                         const FitOptions& opt) {
  const double h = view.resolution();
  ExponentFit fit;
  fit.region = region;
  fit.s_min = opt.s_min > 0.0 ? opt.s_min : (h > 0.0 ? 4.0 * h : 1e-3);
  fit.s_max = opt.s_max > 0.0 ? opt.s_max : (h > 0.0 ? 40.0 * h : 1e-1);
  if (!(fit.s_max > fit.s_min)) throw Error(ErrorCode::precondition, "empty separation range");
  if (opt.n_bins < 4) throw Error(ErrorCode::precondition, "fit needs at least 4 bins");
  // Analytic views have no grid; the smallest separation spans 4 "cells".
  const double cell = h > 0.0 ? h : 0.25 * fit.s_min;
  const Obstacle& obs = scene.obstacle();
  const Box b = scene.bbox();
  Rng rng(opt.seed);

  std::vector<Vec2> starts;
  if (region != FitRegion::interior) {
    if (obs.empty()) throw Error(ErrorCode::precondition, "boundary fits need an obstacle");
    const Region want = region == FitRegion::boundary_S ? Region::S : Region::I;
    const double corner_r = th.corner_exclusion_cells * cell;
    const double src_r = th.source_exclusion_cells * cell;
    for (const Vec2& p : obs.boundary_samples(4096)) {
      bool ok = distance(p, scene.k0()) > src_r;
      for (const Vec2& c : obs.corners()) ok = ok && distance(p, c) > corner_r;
      if (ok && classify_region(scene, p + 10.0 * obs.proj_tol() * obs.normal_at(p)) == want) starts.push_back(p);
    }
    if (starts.empty()) throw Error(ErrorCode::precondition, "region has no boundary points");
  }

  std::vector<double> seps, vals;
  const std::size_t budget = 400 * opt.n_pairs;
  for (std::size_t attempt = 0; attempt < budget && seps.size() < opt.n_pairs; ++attempt) {
    const double s = log_uniform(rng, fit.s_min, fit.s_max);
    Vec2 x, y;
    if (region == FitRegion::interior) {
      x = {rng.uniform(b.lo.x, b.hi.x), rng.uniform(b.lo.y, b.hi.y)};
      y = x + s * unit_at_angle(rng.uniform(0.0, 2.0 * kPi));
      const double collar = th.interior_collar_cells * cell;
      if (!b.contains(y) || view.segment_clearance(x, y) < collar) continue;
      if (distance(closest_point_on_segment(x, y, scene.k0()), scene.k0()) < std::max(collar, view.source_radius())) {
        continue;
      }
      if (view.segment_near_singular(x, y, collar)) continue;
    } else {
      const auto idx = static_cast<std::size_t>(rng.next() % starts.size());
      x = starts[idx];
      const double tilt = deg_to_rad(rng.uniform(-th.normal_cone_deg, th.normal_cone_deg));
      const Vec2 nu = obs.normal_at(x);
      y = x + s * Vec2{nu.x * std::cos(tilt) - nu.y * std::sin(tilt), nu.x * std::sin(tilt) + nu.y * std::cos(tilt)};
      if (!b.contains(y) || distance(y, scene.k0()) <= view.source_radius()) continue;
    }
    double e = 0.0;
    try {
      e = envelope_value(view, x, y);
    } catch (const Error&) {
      continue;
    }
    seps.push_back(s);
    vals.push_back(e);
  }
  fit.n_samples = seps.size();
  if (fit.n_samples < opt.n_pairs / 2) throw Error(ErrorCode::precondition, "too few valid pairs for a fit");
  for (double v : vals) fit.n_positive += v > 0.0 ? 1 : 0;

  const Envelope env = bin_medians(seps, vals, fit.s_min, fit.s_max, opt.n_bins);
  fit.n_bins_used = env.s.size();
  if (fit.n_bins_used < 4) throw Error(ErrorCode::precondition, "too few separation bins with a positive defect");
  const LogFit lf = fit_loglog(env.s, env.e);
  fit.alpha_hat = lf.slope - 1.0;
  fit.C_hat = std::exp(lf.intercept);
  fit.r2 = lf.r2;
  fit.conclusive = fit.r2 >= th.r2_min;
  return fit;
}

ExponentMap exponent_map(const FieldView& view, const Scene& scene, double window, const Thresholds& th,
                         std::uint64_t seed, std::size_t pairs_per_window) {
  const double h = view.resolution();
  if (!(window > 0.0) || (h > 0.0 && window < 8.0 * h)) {
    throw Error(ErrorCode::precondition, "exponent map window must be at least 8 cells");
  }
  const Box b = scene.bbox();
  ExponentMap map;
  map.window = window;
  map.spacing = 0.5 * window;
  map.origin = b.lo + Vec2{0.5 * window, 0.5 * window};
  map.nx = std::max(1, static_cast<int>(std::floor((b.width() - window) / map.spacing)) + 1);
  map.ny = std::max(1, static_cast<int>(std::floor((b.height() - window) / map.spacing)) + 1);
  map.alpha.assign(static_cast<std::size_t>(map.nx * map.ny), std::numeric_limits<double>::quiet_NaN());

  const double s_lo = std::max(4.0 * h, window / 40.0);
  const double s_hi = 0.5 * window;
  Rng rng(seed);
  for (int j = 0; j < map.ny; ++j) {
    for (int i = 0; i < map.nx; ++i) {
      const Vec2 c = map.origin + map.spacing * Vec2{static_cast<double>(i), static_cast<double>(j)};
      const Box w{c - Vec2{0.5 * window, 0.5 * window}, c + Vec2{0.5 * window, 0.5 * window}};
      std::vector<double> seps, vals;
      for (std::size_t a = 0; a < 20 * pairs_per_window && seps.size() < pairs_per_window; ++a) {
        const Vec2 x{rng.uniform(w.lo.x, w.hi.x), rng.uniform(w.lo.y, w.hi.y)};
        const double s = log_uniform(rng, s_lo, s_hi);
        const Vec2 y = x + s * unit_at_angle(rng.uniform(0.0, 2.0 * kPi));
        if (!w.contains(y)) continue;
        try {
          vals.push_back(envelope_value(view, x, y));
          seps.push_back(s);
        } catch (const Error&) {
        }
      }
      const Envelope env = bin_medians(seps, vals, s_lo, s_hi, 6);
      if (env.s.size() < 4) continue;
      const LogFit lf = fit_loglog(env.s, env.e);
      if (lf.r2 >= th.r2_min) map.alpha[static_cast<std::size_t>(j * map.nx + i)] = lf.slope - 1.0;
    }
  }
  return map;
}

}  // namespace odl
