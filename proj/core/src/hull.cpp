#include "odl/hull.hpp"

#include <limits>

#include "odl/errors.hpp"

namespace odl {

Vec2 closest_point_on_segment(Vec2 a, Vec2 b, Vec2 p) {
  const Vec2 ab = b - a;
  const double len2 = norm2(ab);
  if (len2 == 0.0) return a;
  const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return a + t * ab;
}

ConvexHull2D ConvexHull2D::from_points(std::vector<Vec2> pts) {
  ConvexHull2D h;
  std::sort(pts.begin(), pts.end(),
            [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() <= 2) {
    h.v_ = pts;
    return h;
  }
  std::vector<Vec2> out(2 * pts.size());
  std::size_t k = 0;
  for (const Vec2& p : pts) {
    while (k >= 2 && cross(out[k - 1] - out[k - 2], p - out[k - 2]) <= 0.0) --k;
    out[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = pts.size() - 1; i-- > 0;) {
    while (k >= lower && cross(out[k - 1] - out[k - 2], pts[i] - out[k - 2]) <= 0.0) --k;
    out[k++] = pts[i];
  }
  out.resize(k - 1);
  h.v_ = std::move(out);
  return h;
}

Vec2 ConvexHull2D::support(Vec2 dir) const {
  if (v_.empty()) throw Error(ErrorCode::precondition, "support of an empty hull");
  Vec2 best = v_[0];
  double best_s = dot(dir, best);
  for (const Vec2& v : v_) {
    const double s = dot(dir, v);
    if (s > best_s) {
      best_s = s;
      best = v;
    }
  }
  return best;
}

bool ConvexHull2D::contains(Vec2 p, double tol) const {
  if (v_.empty()) return false;
  if (!is_polygon()) return distance(p) <= tol;
  for (std::size_t i = 0; i < v_.size(); ++i) {
    const Vec2 a = v_[i];
    const Vec2 b = v_[(i + 1) % v_.size()];
    const double len = odl::distance(a, b);
    if (cross(b - a, p - a) < -tol * len) return false;
  }
  return true;
}

Vec2 ConvexHull2D::closest_point(Vec2 p) const {
  if (v_.empty()) throw Error(ErrorCode::precondition, "closest point of an empty hull");
  if (v_.size() == 1) return v_[0];
  if (v_.size() == 2) return closest_point_on_segment(v_[0], v_[1], p);
  if (contains(p)) return p;
  Vec2 best = v_[0];
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v_.size(); ++i) {
    const Vec2 q = closest_point_on_segment(v_[i], v_[(i + 1) % v_.size()], p);
    const double d = odl::distance(p, q);
    if (d < best_d) {
      best_d = d;
      best = q;
    }
  }
  return best;
}

double ConvexHull2D::distance(Vec2 p) const { return odl::distance(p, closest_point(p)); }

double ConvexHull2D::signed_boundary_distance(Vec2 p) const {
  if (!is_polygon()) return distance(p);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v_.size(); ++i) {
    best = std::min(best, odl::distance(p, closest_point_on_segment(v_[i], v_[(i + 1) % v_.size()], p)));
  }
  return contains(p) ? -best : best;
}

double ConvexHull2D::area() const {
  double s = 0.0;
  for (std::size_t i = 0; i < v_.size(); ++i) s += cross(v_[i], v_[(i + 1) % v_.size()]);
  return 0.5 * s;
}

double ConvexHull2D::perimeter() const {
  if (v_.size() < 2) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < v_.size(); ++i) s += odl::distance(v_[i], v_[(i + 1) % v_.size()]);
  return s;
}

std::vector<Vec2> ConvexHull2D::boundary_samples(double step) const {
  std::vector<Vec2> out;
  if (v_.size() < 2 || !(step > 0.0)) return v_;
  for (std::size_t i = 0; i < v_.size(); ++i) {
    const Vec2 a = v_[i];
    const Vec2 b = v_[(i + 1) % v_.size()];
    const int n = std::max(1, static_cast<int>(std::ceil(odl::distance(a, b) / step)));
    for (int k = 0; k < n; ++k) out.push_back(a + (static_cast<double>(k) / n) * (b - a));
  }
  return out;
}

bool ConvexHull2D::is_convex() const {
  if (!is_polygon()) return true;
  for (std::size_t i = 0; i < v_.size(); ++i) {
    const Vec2 a = v_[i];
    const Vec2 b = v_[(i + 1) % v_.size()];
    const Vec2 c = v_[(i + 2) % v_.size()];
    if (cross(b - a, c - b) <= 0.0) return false;
  }
  return true;
}

Vec2 min_norm_point(const std::vector<Vec2>& pts) {
  if (pts.empty()) throw Error(ErrorCode::precondition, "min-norm point of an empty set");
  return ConvexHull2D::from_points(pts).closest_point({0.0, 0.0});
}

}  // namespace odl
