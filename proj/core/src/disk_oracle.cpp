#include "odl/disk_oracle.hpp"

#include <cmath>

#include "odl/errors.hpp"
#include "odl/hull.hpp"

namespace odl {

void DiskScene::validate() const {
  if (!(R > 0.0)) throw Error(ErrorCode::precondition, "disk radius must be positive");
  if (!(distance(k0, center) > R)) throw Error(ErrorCode::precondition, "k0 must lie outside the disk");
}

namespace {

double wrap_angle(double t) {
  double m = std::fmod(t, 2.0 * kPi);
  if (m < 0.0) m += 2.0 * kPi;
  return m;
}

double radial_distance(const DiskScene& ds, Vec2 x) {
  const double a = distance(x, ds.center);
  if (a < ds.R * (1.0 - 1e-12)) throw Error(ErrorCode::domain, "point inside the disk");
  return std::max(a, ds.R);
}

bool segment_blocked(const DiskScene& ds, Vec2 x) {
  const Vec2 q = closest_point_on_segment(x, ds.k0, ds.center);
  return distance(q, ds.center) < ds.R * (1.0 - 1e-12);
}

TangentArcPath straight_path(const DiskScene& ds, Vec2 x) {
  TangentArcPath p;
  p.start = x;
  p.t1 = x;
  p.t2 = x;
  p.end = ds.k0;
  p.leg2 = distance(x, ds.k0);
  p.total_length = p.leg2;
  return p;
}

TangentArcPath wrapped_path(const DiskScene& ds, Vec2 x, int turn) {
  const double a = radial_distance(ds, x);
  const double b = distance(ds.k0, ds.center);
  const Vec2 ux = (x - ds.center) / distance(x, ds.center);
  const Vec2 uk = (ds.k0 - ds.center) / b;
  const double ax = std::acos(std::min(1.0, ds.R / a));
  const double ak = std::acos(std::min(1.0, ds.R / b));
  const double s = static_cast<double>(turn);
  TangentArcPath p;
  p.start = x;
  p.end = ds.k0;
  p.wraps = true;
  p.turn = turn;
  p.theta1 = std::atan2(ux.y, ux.x) + s * ax;
  const double theta2 = std::atan2(uk.y, uk.x) - s * ak;
  p.dtheta = wrap_angle(s * (theta2 - p.theta1));
  if (p.dtheta > 2.0 * kPi - 1e-12) p.dtheta = 0.0;
  p.t1 = ds.center + ds.R * unit_at_angle(p.theta1);
  p.t2 = ds.center + ds.R * unit_at_angle(theta2);
  p.leg1 = std::sqrt(std::max(0.0, a * a - ds.R * ds.R));
  p.arc = ds.R * p.dtheta;
  p.leg2 = std::sqrt(std::max(0.0, b * b - ds.R * ds.R));
  p.total_length = p.leg1 + p.arc + p.leg2;
  return p;
}

}  // namespace

Vec2 TangentArcPath::initial_velocity(const DiskScene& ds) const {
  if (!wraps) return (end - start) / distance(end, start);
  if (leg1 > 1e-14) return (t1 - start) / leg1;
  if (arc > 0.0) return static_cast<double>(turn) * perp(unit_at_angle(theta1));
  (void)ds;
  return (end - t2) / distance(end, t2);
}

Vec2 TangentArcPath::at(const DiskScene& ds, double s) const {
  s = std::clamp(s, 0.0, total_length);
  if (!wraps) return start + (s / total_length) * (end - start);
  if (s <= leg1) return leg1 > 0.0 ? start + (s / leg1) * (t1 - start) : start;
  s -= leg1;
  if (s <= arc) return ds.center + ds.R * unit_at_angle(theta1 + turn * s / ds.R);
  s -= arc;
  return leg2 > 0.0 ? t2 + (s / leg2) * (end - t2) : end;
}

std::vector<Vec2> TangentArcPath::polyline(const DiskScene& ds, double step) const {
  const int n = std::max(1, static_cast<int>(std::ceil(total_length / step)));
  std::vector<Vec2> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) out.push_back(at(ds, total_length * k / n));
  return out;
}

std::vector<TangentArcPath> disk_minimizers(const DiskScene& ds, Vec2 x) {
  ds.validate();
  radial_distance(ds, x);
  if (!segment_blocked(ds, x)) return {straight_path(ds, x)};
  TangentArcPath ccw = wrapped_path(ds, x, +1);
  TangentArcPath cw = wrapped_path(ds, x, -1);
  const double tie = 1e-12 * std::max(1.0, ccw.total_length);
  if (std::abs(ccw.total_length - cw.total_length) <= tie) return {ccw, cw};
  return {ccw.total_length < cw.total_length ? ccw : cw};
}

double disk_distance(const DiskScene& ds, Vec2 x) {
  return disk_minimizers(ds, x).front().total_length;
}

std::vector<Vec2> disk_reachable_gradients(const DiskScene& ds, Vec2 x) {
  if (distance(x, ds.k0) == 0.0) throw Error(ErrorCode::domain, "reachable gradients at the target");
  std::vector<Vec2> out;
  for (const TangentArcPath& p : disk_minimizers(ds, x)) out.push_back(-p.initial_velocity(ds));
  return out;
}

Vec2 disk_shadow_axis(const DiskScene& ds) { return normalized(ds.center - ds.k0); }

bool on_disk_symmetry_ray(const DiskScene& ds, Vec2 x, double tol) {
  const Vec2 w = disk_shadow_axis(ds);
  const Vec2 v = x - ds.center;
  return std::abs(cross(v, w)) <= tol * std::max(1.0, norm(v)) && dot(v, w) >= ds.R - tol;
}

Vec2 involute_curve(double R, double r) {
  if (r < 0.0) throw Error(ErrorCode::domain, "involute parameter must be nonnegative");
  return {R * (std::cos(r) + r * std::sin(r)), R * (std::sin(r) - r * std::cos(r))};
}

double involute_curvature(double R, double r) {
  if (!(r > 0.0)) throw Error(ErrorCode::domain, "involute curvature is singular at r <= 0");
  return 1.0 / (R * r);
}

double involute_curvature_fd(double R, double r, double step) {
  if (!(r > step)) throw Error(ErrorCode::domain, "finite-difference stencil crosses the cusp");
  const Vec2 cm = involute_curve(R, r - step);
  const Vec2 c0 = involute_curve(R, r);
  const Vec2 cp = involute_curve(R, r + step);
  const Vec2 d1 = (cp - cm) / (2.0 * step);
  const Vec2 d2 = (cp - 2.0 * c0 + cm) / (step * step);
  const double sp = norm(d1);
  return std::abs(cross(d1, d2)) / (sp * sp * sp);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) throw Error(ErrorCode::precondition, "slope fit needs two points");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

CorollaryScan corollary_defect_scan(const DiskScene& ds, const std::vector<double>& alphas,
                                    const std::vector<double>& r_values) {
  ds.validate();
  if (std::abs(ds.R - 1.0) > 1e-12 || norm(ds.center) > 1e-12 || std::abs(ds.k0.y) > 1e-12 ||
      !(ds.k0.x < -1.0)) {
    throw Error(ErrorCode::precondition, "scan expects the unit disk at the origin and k0 = (-M, 0)");
  }
  CorollaryScan scan;
  for (double alpha : alphas) {
    std::vector<double> rs, ratios;
    for (double r : r_values) {
      if (!(r > 0.0)) throw Error(ErrorCode::domain, "scan radii must be positive");
      const double s = std::sin(r);
      const double c = std::cos(r);
      CorollaryRow row;
      row.alpha = alpha;
      row.r = r;
      row.lhs = std::pow(r, -alpha) * (s / r - c);
      row.rhs = std::pow(std::hypot((c - 1.0) / r + s, s / r - c), 1.0 + alpha);
      row.ratio = row.lhs / row.rhs;
      scan.rows.push_back(row);
      rs.push_back(r);
      ratios.push_back(row.ratio);
    }
    CorollarySummary sum;
    sum.alpha = alpha;
    sum.slope = loglog_slope(rs, ratios);
    sum.growth_slope = -sum.slope;
    sum.bounded = std::abs(sum.slope) < 0.05;
    scan.summary.push_back(sum);
  }
  return scan;
}

}  // namespace odl
