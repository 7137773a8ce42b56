#include "odl/scene.hpp"

#include <cstdio>
#include <utility>

#include "odl/errors.hpp"

namespace odl {

Scene::Scene(Obstacle obstacle, Vec2 k0, Metric metric, Box bbox)
    : obstacle_(std::move(obstacle)), k0_(k0), metric_(std::move(metric)), bbox_(bbox) {
  if (!(bbox_.width() > 0.0 && bbox_.height() > 0.0)) {
    throw Error(ErrorCode::precondition, "bbox must have positive extent");
  }
  if (!bbox_.contains(k0_) || bbox_.inner_margin(k0_) <= 0.0) {
    throw Error(ErrorCode::precondition, "k0 must lie strictly inside the bbox");
  }
  if (!obstacle_.empty()) {
    if (!(obstacle_.phi(k0_) > 0.0)) {
      throw Error(ErrorCode::precondition, "k0 must lie strictly outside the obstacle");
    }
    const Box ob = obstacle_.bounds();
    if (!bbox_.contains(ob.lo) || !bbox_.contains(ob.hi)) {
      throw Error(ErrorCode::precondition, "bbox must contain the obstacle");
    }
  }
  // Metric must be SPD over the box; a 9x9 lattice covers affine fields
  // exactly (corners) and spot-checks general ones.
  for (int j = 0; j <= 8; ++j) {
    for (int i = 0; i <= 8; ++i) {
      const Vec2 p = bbox_.lo + Vec2{bbox_.width() * i / 8.0, bbox_.height() * j / 8.0};
      metric_.check_spd(p);
    }
  }
  double pad = bbox_.inner_margin(k0_);
  if (!obstacle_.empty()) {
    const Box ob = obstacle_.bounds();
    pad = std::min(pad, std::min(bbox_.inner_margin(ob.lo), bbox_.inner_margin(ob.hi)));
  }
  const double need = required_padding();
  if (pad < need) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "bbox padding %.6g is below the recommended %.6g", pad, need);
    warnings_.emplace_back(buf);
  }
}

double Scene::required_padding() const {
  if (obstacle_.empty()) return 0.0;
  std::vector<Vec2> pts = obstacle_.boundary_samples(256);
  pts.push_back(k0_);
  double diam = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) diam = std::max(diam, distance(pts[i], pts[j]));
  }
  return 0.5 * diam;
}

namespace {

void require_in_bbox(const Scene& scene, Vec2 x) {
  const Box b = scene.bbox();
  const double tol = 1e-12 * std::max(1.0, b.diameter());
  if (!b.contains(x, tol)) throw Error(ErrorCode::domain, "point outside the scene bbox");
}

}  // namespace

double signed_distance(const Scene& scene, Vec2 x) {
  require_in_bbox(scene, x);
  return scene.obstacle().signed_distance(x);
}

Vec2 outward_normal(const Scene& scene, Vec2 x, double band_width) {
  const Obstacle& o = scene.obstacle();
  if (o.empty()) throw Error(ErrorCode::precondition, "normal of an empty obstacle");
  if (!(std::abs(o.signed_distance(x)) < band_width)) {
    throw Error(ErrorCode::precondition, "point outside the boundary band");
  }
  return o.normal_at(o.project(x));
}

Vec2 project_boundary(const Scene& scene, Vec2 x) {
  require_in_bbox(scene, x);
  return scene.obstacle().project(x);
}

double boundary_curvature(const Scene& scene, Vec2 boundary_point) {
  const Obstacle& o = scene.obstacle();
  if (std::abs(o.signed_distance(boundary_point)) > std::max(o.proj_tol(), 1e-9)) {
    throw Error(ErrorCode::precondition, "curvature query off the boundary");
  }
  return o.curvature_at(boundary_point);
}

ConvexHull2D convex_hull_2d(const Scene& scene, int n_samples) {
  if (n_samples < 16) throw Error(ErrorCode::precondition, "convex hull needs at least 16 samples");
  ConvexHull2D h = ConvexHull2D::from_points(scene.obstacle().boundary_samples(n_samples));
  if (!h.is_polygon()) {
    throw Error(ErrorCode::degenerate_point, "fewer than three non-collinear boundary samples");
  }
  return h;
}

const char* to_string(Region r) { return r == Region::I ? "I" : "S"; }

Region classify_region(const Scene& scene, Vec2 x, int seg_samples) {
  if (!scene.metric().is_identity()) {
    throw Error(ErrorCode::unsupported, "region classification needs the identity metric");
  }
  const Obstacle& o = scene.obstacle();
  if (o.empty()) return Region::I;
  if (o.phi(x) < 0.0) throw Error(ErrorCode::precondition, "point inside the obstacle");
  const Vec2 k0 = scene.k0();
  // The 2n pass contains every sample of the n pass, so a hit can only be
  // confirmed, never lost, by refinement.
  for (int n : {seg_samples, 2 * seg_samples}) {
    for (int k = 1; k < n; ++k) {
      const double t = static_cast<double>(k) / n;
      if (o.phi(x + t * (k0 - x)) < 0.0) return Region::S;
    }
  }
  return Region::I;
}

}  // namespace odl
