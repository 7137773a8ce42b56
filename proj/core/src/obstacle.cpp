#include "odl/obstacle.hpp"

#include <limits>
#include <utility>

#include "odl/errors.hpp"

namespace odl {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Vec2 radial_unit(Vec2 v) {
  const double n = norm(v);
  return n > 0.0 ? v / n : Vec2{1.0, 0.0};
}

// Robust bisection for the closest point on an ellipse (first quadrant,
// e0 >= e1). Follows the standard root-finding formulation on the
// Lagrange multiplier s.
double ellipse_root(double r0, double z0, double z1, double g) {
  const double n0 = r0 * z0;
  double s0 = z1 - 1.0;
  double s1 = (g < 0.0) ? 0.0 : std::hypot(n0, z1) - 1.0;
  double s = 0.0;
  for (int i = 0; i < 1100; ++i) {
    s = 0.5 * (s0 + s1);
    if (s == s0 || s == s1) break;
    const double ratio0 = n0 / (s + r0);
    const double ratio1 = z1 / (s + 1.0);
    g = ratio0 * ratio0 + ratio1 * ratio1 - 1.0;
    if (g > 0.0) {
      s0 = s;
    } else if (g < 0.0) {
      s1 = s;
    } else {
      break;
    }
  }
  return s;
}

Vec2 ellipse_closest_first_quadrant(double e0, double e1, double y0, double y1) {
  if (y1 > 0.0) {
    if (y0 > 0.0) {
      const double z0 = y0 / e0;
      const double z1 = y1 / e1;
      const double g = z0 * z0 + z1 * z1 - 1.0;
      if (g != 0.0) {
        const double r0 = (e0 / e1) * (e0 / e1);
        const double sbar = ellipse_root(r0, z0, z1, g);
        return {r0 * y0 / (sbar + r0), y1 / (sbar + 1.0)};
      }
      return {y0, y1};
    }
    return {0.0, e1};
  }
  const double numer0 = e0 * y0;
  const double denom0 = e0 * e0 - e1 * e1;
  if (numer0 < denom0) {
    const double xde0 = numer0 / denom0;
    return {e0 * xde0, e1 * std::sqrt(std::max(0.0, 1.0 - xde0 * xde0))};
  }
  return {e0, 0.0};
}

Vec2 closest_on_arc(const Circle& c, Vec2 x) {
  return c.center + c.radius * radial_unit(x - c.center);
}

}  // namespace

Obstacle Obstacle::none() {
  Obstacle o;
  o.kind_ = Kind::none;
  o.bounds_ = Box{{0.0, 0.0}, {0.0, 0.0}};
  return o;
}

Obstacle Obstacle::disk(Vec2 center, double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::precondition, "disk radius must be positive");
  Obstacle o;
  o.kind_ = Kind::disk;
  o.c1_ = {center, radius};
  o.bounds_ = Box{center - Vec2{radius, radius}, center + Vec2{radius, radius}};
  return o;
}

Obstacle Obstacle::ellipse(Vec2 center, double semi_x, double semi_y) {
  if (!(semi_x > 0.0 && semi_y > 0.0)) {
    throw Error(ErrorCode::precondition, "ellipse semi-axes must be positive");
  }
  Obstacle o;
  o.kind_ = Kind::ellipse;
  o.c1_ = {center, std::max(semi_x, semi_y)};
  o.axes_ = {semi_x, semi_y};
  o.bounds_ = Box{center - o.axes_, center + o.axes_};
  return o;
}

Obstacle Obstacle::crescent(Circle outer, Circle inner) {
  const double dc = distance(outer.center, inner.center);
  if (!(outer.radius > 0.0 && inner.radius > 0.0) ||
      !(dc < outer.radius + inner.radius && dc > std::abs(outer.radius - inner.radius))) {
    throw Error(ErrorCode::precondition, "crescent circles must intersect in two points");
  }
  Obstacle o;
  o.kind_ = Kind::crescent;
  o.convex_ = false;
  o.c1_ = outer;
  o.c2_ = inner;
  o.bounds_ = Box{outer.center - Vec2{outer.radius, outer.radius},
                  outer.center + Vec2{outer.radius, outer.radius}};
  // Circle-circle intersection.
  const Vec2 u = (inner.center - outer.center) / dc;
  const double a = (dc * dc + outer.radius * outer.radius - inner.radius * inner.radius) / (2.0 * dc);
  const double hgt = std::sqrt(std::max(0.0, outer.radius * outer.radius - a * a));
  const Vec2 base = outer.center + a * u;
  o.corners_ = {base + hgt * perp(u), base - hgt * perp(u)};
  return o;
}

Obstacle Obstacle::custom(ImplicitFn phi, ImplicitGradientFn grad, Box bounds,
                          std::vector<Vec2> corners, bool convex) {
  if (!phi || !grad) throw Error(ErrorCode::precondition, "custom obstacle needs phi and grad(phi)");
  Obstacle o;
  o.kind_ = Kind::custom;
  o.convex_ = convex;
  o.phi_fn_ = std::move(phi);
  o.grad_fn_ = std::move(grad);
  o.bounds_ = bounds;
  o.corners_ = std::move(corners);
  return o;
}

std::optional<Circle> Obstacle::as_disk() const {
  if (kind_ == Kind::disk) return c1_;
  return std::nullopt;
}

double Obstacle::phi(Vec2 x) const {
  switch (kind_) {
    case Kind::none: return kInf;
    case Kind::disk: return distance(x, c1_.center) - c1_.radius;
    case Kind::ellipse: {
      const Vec2 d = x - c1_.center;
      return (d.x * d.x) / (axes_.x * axes_.x) + (d.y * d.y) / (axes_.y * axes_.y) - 1.0;
    }
    case Kind::crescent:
      return std::max(distance(x, c1_.center) - c1_.radius, c2_.radius - distance(x, c2_.center));
    case Kind::custom: return phi_fn_(x);
  }
  return kInf;
}

Vec2 Obstacle::phi_gradient(Vec2 x) const {
  switch (kind_) {
    case Kind::none: return {};
    case Kind::disk: return radial_unit(x - c1_.center);
    case Kind::ellipse: {
      const Vec2 d = x - c1_.center;
      return {2.0 * d.x / (axes_.x * axes_.x), 2.0 * d.y / (axes_.y * axes_.y)};
    }
    case Kind::crescent: {
      const double po = distance(x, c1_.center) - c1_.radius;
      const double pi = c2_.radius - distance(x, c2_.center);
      return po >= pi ? radial_unit(x - c1_.center) : -radial_unit(x - c2_.center);
    }
    case Kind::custom: return grad_fn_(x);
  }
  return {};
}

bool Obstacle::on_outer_arc(Vec2 p) const {
  return distance(p, c2_.center) >= c2_.radius - 1e-12;
}

bool Obstacle::on_inner_arc(Vec2 p) const {
  return distance(p, c1_.center) <= c1_.radius + 1e-12;
}

Vec2 Obstacle::project_ellipse(Vec2 x) const {
  const Vec2 d = x - c1_.center;
  const bool swap = axes_.x < axes_.y;
  const double e0 = swap ? axes_.y : axes_.x;
  const double e1 = swap ? axes_.x : axes_.y;
  const double y0 = std::abs(swap ? d.y : d.x);
  const double y1 = std::abs(swap ? d.x : d.y);
  const Vec2 q = ellipse_closest_first_quadrant(e0, e1, y0, y1);
  double qx = swap ? q.y : q.x;
  double qy = swap ? q.x : q.y;
  if (d.x < 0.0) qx = -qx;
  if (d.y < 0.0) qy = -qy;
  return c1_.center + Vec2{qx, qy};
}

Vec2 Obstacle::project_crescent(Vec2 x) const {
  Vec2 best = corners_[0];
  double best_d = distance(x, best);
  auto consider = [&](Vec2 p) {
    const double dd = distance(x, p);
    if (dd < best_d) {
      best_d = dd;
      best = p;
    }
  };
  consider(corners_[1]);
  const Vec2 qo = closest_on_arc(c1_, x);
  if (on_outer_arc(qo)) consider(qo);
  const Vec2 qi = closest_on_arc(c2_, x);
  if (on_inner_arc(qi)) consider(qi);
  return best;
}

Vec2 Obstacle::project_newton(Vec2 x) const {
  Vec2 p = x;
  const double tol = proj_tol();
  for (int it = 0; it < 200; ++it) {
    const double f = phi_fn_(p);
    if (std::abs(f) <= tol) return p;
    const Vec2 g = grad_fn_(p);
    const double g2 = norm2(g);
    if (g2 < 1e-24) throw Error(ErrorCode::degenerate_gradient, "grad(phi) vanishes during projection");
    p -= (f / g2) * g;
  }
  throw Error(ErrorCode::no_convergence, "boundary projection did not converge");
}

Vec2 Obstacle::project(Vec2 x) const {
  switch (kind_) {
    case Kind::none: throw Error(ErrorCode::precondition, "projection onto an empty obstacle");
    case Kind::disk: return closest_on_arc(c1_, x);
    case Kind::ellipse: return project_ellipse(x);
    case Kind::crescent: return project_crescent(x);
    case Kind::custom: return project_newton(x);
  }
  return x;
}

double Obstacle::signed_distance(Vec2 x) const {
  if (kind_ == Kind::none) return kInf;
  if (kind_ == Kind::disk) return distance(x, c1_.center) - c1_.radius;
  const double dist = distance(x, project(x));
  return phi(x) < 0.0 ? -dist : dist;
}

Vec2 Obstacle::normal_at(Vec2 p) const {
  const Vec2 g = phi_gradient(p);
  const double n = norm(g);
  if (!(n > 1e-12)) throw Error(ErrorCode::degenerate_gradient, "grad(phi) vanishes at boundary point");
  return g / n;
}

double Obstacle::curvature_at(Vec2 p) const {
  for (const Vec2& c : corners_) {
    if (distance(c, p) < 1e-7) {
      throw Error(ErrorCode::degenerate_gradient, "curvature undefined at a boundary corner");
    }
  }
  switch (kind_) {
    case Kind::none: throw Error(ErrorCode::precondition, "curvature of an empty obstacle");
    case Kind::disk: return 1.0 / c1_.radius;
    case Kind::ellipse: {
      const Vec2 d = p - c1_.center;
      const double ia2 = 1.0 / (axes_.x * axes_.x);
      const double ib2 = 1.0 / (axes_.y * axes_.y);
      const double fx = 2.0 * d.x * ia2;
      const double fy = 2.0 * d.y * ib2;
      const double g = std::hypot(fx, fy);
      if (g < 1e-14) throw Error(ErrorCode::degenerate_gradient, "grad(phi) vanishes");
      return (2.0 * ia2 * fy * fy + 2.0 * ib2 * fx * fx) / (g * g * g);
    }
    case Kind::crescent: {
      const double eo = std::abs(distance(p, c1_.center) - c1_.radius);
      const double ei = std::abs(distance(p, c2_.center) - c2_.radius);
      return eo <= ei ? 1.0 / c1_.radius : -1.0 / c2_.radius;
    }
    case Kind::custom: {
      const double s = 1e-4 * std::max(1.0, std::max(bounds_.width(), bounds_.height()));
      const Vec2 ex{s, 0.0}, ey{0.0, s};
      const double f0 = phi_fn_(p);
      const double fxx = (phi_fn_(p + ex) - 2.0 * f0 + phi_fn_(p - ex)) / (s * s);
      const double fyy = (phi_fn_(p + ey) - 2.0 * f0 + phi_fn_(p - ey)) / (s * s);
      const double fxy = (phi_fn_(p + ex + ey) - phi_fn_(p + ex - ey) - phi_fn_(p - ex + ey) +
                          phi_fn_(p - ex - ey)) / (4.0 * s * s);
      const Vec2 g = grad_fn_(p);
      const double gn = norm(g);
      if (gn < 1e-12) throw Error(ErrorCode::degenerate_gradient, "grad(phi) vanishes");
      return (fxx * g.y * g.y - 2.0 * fxy * g.x * g.y + fyy * g.x * g.x) / (gn * gn * gn);
    }
  }
  return 0.0;
}

std::vector<Vec2> Obstacle::boundary_samples(int n) const {
  std::vector<Vec2> out;
  if (n <= 0 || kind_ == Kind::none) return out;
  out.reserve(static_cast<std::size_t>(n));
  switch (kind_) {
    case Kind::none: break;
    case Kind::disk:
      for (int k = 0; k < n; ++k) {
        out.push_back(c1_.center + c1_.radius * unit_at_angle(2.0 * kPi * k / n));
      }
      break;
    case Kind::ellipse:
      for (int k = 0; k < n; ++k) {
        const double t = 2.0 * kPi * k / n;
        out.push_back(c1_.center + Vec2{axes_.x * std::cos(t), axes_.y * std::sin(t)});
      }
      break;
    case Kind::crescent: {
      // Both arcs are centered on the direction pointing away from the
      // inner disk; half-widths are read off the corner angles.
      const double mid = std::atan2(c1_.center.y - c2_.center.y, c1_.center.x - c2_.center.x);
      const Vec2 co = corners_[0] - c1_.center;
      const Vec2 ci = corners_[0] - c2_.center;
      const double half_o = std::abs(canonical_angle(std::atan2(co.y, co.x) - mid));
      const double half_i = std::abs(canonical_angle(std::atan2(ci.y, ci.x) - mid));
      const double len_o = 2.0 * half_o * c1_.radius;
      const double len_i = 2.0 * half_i * c2_.radius;
      const int n_o = std::max(2, static_cast<int>(std::lround(n * len_o / (len_o + len_i))));
      const int n_i = std::max(2, n - n_o);
      for (int k = 0; k <= n_o; ++k) {
        const double t = mid - half_o + 2.0 * half_o * k / n_o;
        out.push_back(c1_.center + c1_.radius * unit_at_angle(t));
      }
      for (int k = 1; k < n_i; ++k) {
        const double t = mid + half_i - 2.0 * half_i * k / n_i;
        out.push_back(c2_.center + c2_.radius * unit_at_angle(t));
      }
      break;
    }
    case Kind::custom: {
      // Sign changes of phi along the edges of a scan lattice, snapped to the
      // zero level set.
      const int m = std::max(64, n / 2);
      const double dx = bounds_.width() / m;
      const double dy = bounds_.height() / m;
      auto sample_edge = [&](Vec2 a, Vec2 b) {
        const double fa = phi_fn_(a);
        const double fb = phi_fn_(b);
        if ((fa < 0.0) == (fb < 0.0)) return;
        const double t = fa / (fa - fb);
        out.push_back(project_newton(a + t * (b - a)));
      };
      for (int j = 0; j <= m; ++j) {
        for (int i = 0; i <= m; ++i) {
          const Vec2 p = bounds_.lo + Vec2{i * dx, j * dy};
          if (i < m) sample_edge(p, p + Vec2{dx, 0.0});
          if (j < m) sample_edge(p, p + Vec2{0.0, dy});
        }
      }
      break;
    }
  }
  return out;
}

}  // namespace odl
