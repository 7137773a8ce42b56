#include <doctest.h>

#include <cmath>

#include "odl/disk_oracle.hpp"
#include "odl/eikonal.hpp"
#include "odl/errors.hpp"
#include "odl/singularity.hpp"

using namespace odl;

namespace {

Scene disk_scene() {
  return Scene(Obstacle::disk({0.0, 0.0}, 1.0), {2.0, 0.0}, Metric::identity(), Box{{-3.0, -3.0}, {3.0, 3.0}});
}

const DistanceField& disk_field() {
  static const DistanceField f = solve_isotropic_fmm(disk_scene(), 0.01);
  return f;
}

const SingularDetection& disk_detection() {
  static const SingularDetection d = detect_singular_set(disk_field(), disk_scene(), Thresholds{});
  return d;
}

}  // namespace

TEST_CASE("reachable gradients on the singular ray") {
  const Scene s = disk_scene();
  const GradientSet g = reachable_gradients_numeric(disk_field(), s, {-2.0, 0.0}, Thresholds{});
  CHECK(g.is_singular);
  REQUIRE(g.reachables.size() == 2);
  // Exact set: -gamma'(0) for the two tangent paths, (sqrt3/2, +-1/2) mirrored.
  const std::vector<Vec2> exact = disk_reachable_gradients(DiskScene{}, {-2.0, 0.0});
  REQUIRE(exact.size() == 2);
  for (const Vec2& r : g.reachables) {
    double best = 10.0;
    for (const Vec2& e : exact) best = std::min(best, angle_between(r, e));
    CHECK(best < deg_to_rad(5.0));
  }
  CHECK(g.min_norm_point.x == doctest::Approx(-std::sqrt(3.0) / 2.0).epsilon(0.05));
  CHECK(std::abs(g.min_norm_point.y) < 0.05);
}

TEST_CASE("reachable gradients off the singular set") {
  const Scene s = disk_scene();
  const GradientSet g = reachable_gradients_numeric(disk_field(), s, {0.0, 2.0}, Thresholds{});
  CHECK_FALSE(g.is_singular);
  REQUIRE(g.reachables.size() == 1);
  const Vec2 exact = disk_reachable_gradients(DiskScene{}, {0.0, 2.0}).front();
  CHECK(angle_between(g.reachables.front(), exact) < deg_to_rad(5.0));
  CHECK(norm(g.min_norm_point) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("reachable gradients at the boundary singular point") {
  const Scene s = disk_scene();
  const GradientSet g = reachable_gradients_numeric(disk_field(), s, {-1.0, 0.0}, Thresholds{});
  CHECK(g.boundary_mode);
  CHECK(g.is_singular);
  CHECK(g.reachables.size() == 2);
  // Both gradients are tangent to the circle, so the hull passes through 0.
  CHECK(norm(g.min_norm_point) < 0.1);
}

TEST_CASE("reachable gradients inside the source ball") {
  CHECK_THROWS_AS(reachable_gradients_numeric(disk_field(), disk_scene(), {2.01, 0.0}, Thresholds{}), Error);
}

TEST_CASE("cluster directions") {
  const std::vector<Vec2> dirs{unit_at_angle(0.0), unit_at_angle(deg_to_rad(3.0)), unit_at_angle(deg_to_rad(90.0)),
                               unit_at_angle(deg_to_rad(-3.0))};
  const std::vector<Vec2> c = cluster_directions(dirs, 10.0);
  REQUIRE(c.size() == 2);
  bool has_x = false, has_y = false;
  for (const Vec2& v : c) {
    has_x = has_x || angle_between(v, {1.0, 0.0}) < 1e-9;
    has_y = has_y || angle_between(v, {0.0, 1.0}) < 1e-9;
  }
  CHECK(has_x);
  CHECK(has_y);
  // Clusters wrap across +-pi.
  CHECK(cluster_directions({unit_at_angle(kPi - 0.01), unit_at_angle(-kPi + 0.01)}, 10.0).size() == 1);
}

TEST_CASE("detected singular set covers the shadow ray") {
  const DistanceField& f = disk_field();
  const SingularDetection& det = disk_detection();
  CHECK(det.n_confirmed > 0);
  CHECK(det.n_confirmed <= det.n_candidates);
  const Thresholds th;
  const double h = f.grid.h;
  int covered = 0, total = 0;
  for (double x = -1.2; x >= -2.8; x -= 0.1) {
    ++total;
    int i, j;
    f.grid.nearest({x, 0.0}, i, j);
    bool hit = false;
    for (int dj = -2; dj <= 2 && !hit; ++dj) {
      if (f.grid.valid(i, j + dj) && det.confirmed[f.grid.index(i, j + dj)]) hit = true;
    }
    covered += hit;
  }
  CHECK(covered == total);
  // Nothing is confirmed far from the ray.
  for (std::size_t idx = 0; idx < f.grid.size(); ++idx) {
    if (!det.confirmed[idx]) continue;
    const Vec2 p = f.grid.point(idx);
    CHECK(std::abs(p.y) <= 3.0 * h + th.boundary_band_cells * h);
    CHECK(p.x < -1.0 + 3.0 * h);
  }
}

TEST_CASE("free space has no singular set") {
  const Scene s(Obstacle::none(), {0.0, 0.0}, Metric::identity(), Box{{-1.0, -1.0}, {1.0, 1.0}});
  const DistanceField f = solve_isotropic_fmm(s, 0.02);
  const SingularDetection det = detect_singular_set(f, s, Thresholds{});
  CHECK(det.n_confirmed == 0);
  CHECK_THROWS_AS(hull_singularity_search(f, s, det.confirmed, Thresholds{}), Error);
}

TEST_CASE("singular flow along the ray") {
  const Scene s = disk_scene();
  const SingularArc arc = integrate_singular_flow(disk_field(), s, {-1.0, 0.0}, 1.0, Thresholds{});
  CHECK(arc.boundary_seeded);
  REQUIRE(arc.samples.size() > 10);
  for (std::size_t k = 1; k < arc.samples.size(); ++k) {
    CHECK(arc.samples[k].d >= arc.samples[k - 1].d - 1e-9);
    CHECK(std::abs(arc.samples[k].x.y) < 0.05);
  }
  // On the ray |x'| = sqrt(1 - 1/x^2), so |x(t)| = sqrt(1 + t^2) from the boundary.
  const ArcSample& last = arc.samples.back();
  CHECK(std::abs(last.x.x + std::sqrt(1.0 + last.t * last.t)) < 0.05);
}

TEST_CASE("hull search finds the boundary singular point") {
  const Scene s = disk_scene();
  const HullSearch hs = hull_singularity_search(disk_field(), s, disk_detection().confirmed, Thresholds{});
  REQUIRE_FALSE(hs.hits.empty());
  for (const Vec2& p : hs.hits) CHECK(distance(p, {-1.0, 0.0}) < 0.05);
  CHECK(distance(hs.argmax, {-1.0, 0.0}) < 0.05);
  CHECK(hs.max_d == doctest::Approx(std::sqrt(3.0) + 2.0 * kPi / 3.0).epsilon(0.03));
}

TEST_CASE("boundary singular points of the disk") {
  const std::vector<Vec2> pts =
      boundary_singular_points(disk_field(), disk_scene(), disk_detection().confirmed, Thresholds{});
  REQUIRE(pts.size() == 1);
  CHECK(distance(pts.front(), {-1.0, 0.0}) < 0.05);
}

TEST_CASE("propagation probe preconditions") {
  const Scene s = disk_scene();
  const std::vector<std::uint8_t>& conf = disk_detection().confirmed;
  CHECK_THROWS_AS(local_propagation_probe(disk_field(), s, conf, {0.0, 1.0}, 0.3, Thresholds{}), Error);
  const PropagationProbe p = local_propagation_probe(disk_field(), s, conf, {-1.0, 0.0}, 0.3, Thresholds{});
  CHECK(p.annulus_count > 0);
  CHECK(p.leaves_x0);
  CHECK(p.chain_outside_obstacle);
}
