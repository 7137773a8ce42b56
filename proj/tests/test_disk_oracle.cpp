#include <doctest.h>

#include <cmath>

#include "odl/disk_oracle.hpp"
#include "odl/errors.hpp"
#include "odl/random.hpp"
#include "odl/scene.hpp"

using namespace odl;

namespace {

const DiskScene kDisk{{0.0, 0.0}, 1.0, {2.0, 0.0}};

// Shortest polygonal path from x around the unit disk to k0 = (2, 0): both
// endpoints connect to a chain of m points on the circle of radius
// 1/cos(pi/m), whose chords never enter the disk.
double polygonal_upper_bound(Vec2 x, int m) {
  const double rho = 1.0 / std::cos(kPi / m);
  double best = INFINITY;
  for (int sign : {1, -1}) {
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        const Vec2 pa = rho * unit_at_angle(2.0 * kPi * a / m);
        const Vec2 pb = rho * unit_at_angle(2.0 * kPi * b / m);
        // The leg x -> pa and pb -> k0 must avoid the open disk.
        auto clear = [](Vec2 p, Vec2 q) {
          const Vec2 d = q - p;
          const double t = std::clamp(-dot(p, d) / norm2(d), 0.0, 1.0);
          return norm(p + t * d) >= 1.0 - 1e-12;
        };
        if (!clear(x, pa) || !clear(pb, kDisk.k0)) continue;
        int steps = sign > 0 ? (b - a + m) % m : (a - b + m) % m;
        const double chain = steps * 2.0 * rho * std::sin(kPi / m);
        best = std::min(best, distance(x, pa) + chain + distance(pb, kDisk.k0));
      }
    }
  }
  return best;
}

}  // namespace

TEST_CASE("disk distance examples") {
  CHECK(disk_distance(kDisk, {1.5, 0.0}) == doctest::Approx(0.5).epsilon(1e-15));
  const double expect = 2.0 * std::sqrt(3.0) + kPi / 3.0;
  CHECK(disk_distance(kDisk, {-2.0, 0.0}) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(expect == doctest::Approx(4.511299).epsilon(1e-6));
  CHECK(disk_distance(kDisk, {-1.0, 0.0}) == doctest::Approx(std::sqrt(3.0) + 2.0 * kPi / 3.0).epsilon(1e-14));
  CHECK(disk_distance(kDisk, {-1.0, 0.0}) == doctest::Approx(3.826446).epsilon(1e-6));
  CHECK_THROWS_AS(disk_distance(kDisk, {0.2, 0.1}), Error);
}

TEST_CASE("disk distance against polygonal paths") {
  // Polygon paths are admissible, so each bound lies above d and converges to it.
  const double d = disk_distance(kDisk, {-2.0, 0.0});
  const double up = polygonal_upper_bound({-2.0, 0.0}, 720);
  CHECK(up >= d - 1e-12);
  CHECK(up - d < 1e-4);
  const double d2 = disk_distance(kDisk, {-1.5, 1.2});
  const double up2 = polygonal_upper_bound({-1.5, 1.2}, 720);
  CHECK(up2 >= d2 - 1e-12);
  CHECK(up2 - d2 < 1e-4);
}

TEST_CASE("minimizer sets") {
  const auto one = disk_minimizers(kDisk, {1.5, 0.0});
  REQUIRE(one.size() == 1);
  CHECK_FALSE(one[0].wraps);

  const auto two = disk_minimizers(kDisk, {-2.0, 0.0});
  REQUIRE(two.size() == 2);
  CHECK(two[0].t1.y == doctest::Approx(-two[1].t1.y));
  CHECK(two[0].t1.x == doctest::Approx(two[1].t1.x));
  CHECK(two[0].total_length == doctest::Approx(two[1].total_length));

  const auto tie_broken = disk_minimizers(kDisk, {-2.0, 0.001});
  REQUIRE(tie_broken.size() == 1);
  // Starting slightly above the axis, the shorter path wraps over the top.
  CHECK(tie_broken[0].t1.y > 0.0);
}

TEST_CASE("tangent-arc path invariants") {
  Rng rng(7);
  for (int k = 0; k < 2000; ++k) {
    const Vec2 x{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
    if (norm(x) <= 1.0 || distance(x, kDisk.k0) < 1e-6) continue;
    for (const TangentArcPath& p : disk_minimizers(kDisk, x)) {
      CHECK(p.total_length == doctest::Approx(disk_distance(kDisk, x)).epsilon(1e-12));
      CHECK(p.total_length == doctest::Approx(p.leg1 + p.arc + p.leg2).epsilon(1e-12));
      if (!p.wraps) continue;
      CHECK(p.arc == doctest::Approx(kDisk.R * p.dtheta).epsilon(1e-12));
      if (p.leg1 > 1e-9) CHECK(std::abs(dot(normalized(p.t1 - x), normalized(p.t1))) < 1e-9);
      if (p.leg2 > 1e-9) CHECK(std::abs(dot(normalized(kDisk.k0 - p.t2), normalized(p.t2))) < 1e-9);
    }
  }
}

TEST_CASE("oracle agrees with the straight line on I(k0) and is 1-Lipschitz") {
  const Scene s(Obstacle::disk({0.0, 0.0}, 1.0), {2.0, 0.0}, Metric::identity(), Box{{-3.0, -3.0}, {3.0, 3.0}});
  Rng rng(9);
  int lip_checked = 0;
  while (lip_checked < 10000) {
    const Vec2 x{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
    const Vec2 y{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
    if (norm(x) <= 1.0 || norm(y) <= 1.0) continue;
    if (classify_region(s, x) == Region::I) CHECK(disk_distance(kDisk, x) == doctest::Approx(distance(x, kDisk.k0)));
    // Lipschitz in the straight-line distance only when the chord misses the disk.
    if (norm(closest_point_on_segment(x, y, {0.0, 0.0})) <= 1.0) continue;
    CHECK(std::abs(disk_distance(kDisk, x) - disk_distance(kDisk, y)) <= distance(x, y) + 1e-12);
    ++lip_checked;
  }
}

TEST_CASE("reachable gradients") {
  const auto g = disk_reachable_gradients(kDisk, {-2.0, 0.0});
  REQUIRE(g.size() == 2);
  for (const Vec2& p : g) {
    CHECK(p.x == doctest::Approx(-std::sqrt(3.0) / 2.0));
    CHECK(std::abs(p.y) == doctest::Approx(0.5));
  }
  CHECK(g[0].y * g[1].y < 0.0);

  const auto free = disk_reachable_gradients(kDisk, {3.0, 0.0});
  REQUIRE(free.size() == 1);
  CHECK(free[0].x == doctest::Approx(1.0));

  const auto b = disk_reachable_gradients(kDisk, {-1.0, 0.0});
  REQUIRE(b.size() == 2);
  for (const Vec2& p : b) {
    CHECK(std::abs(p.x) < 1e-9);
    CHECK(std::abs(p.y) == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(disk_reachable_gradients(kDisk, kDisk.k0), Error);
}

TEST_CASE("boundary reachables of S(k0) are tangential") {
  for (int k = 0; k < 360; ++k) {
    const Vec2 x = unit_at_angle(2.0 * kPi * k / 360.0);
    if (x.x > 0.5 - 1e-12) continue;  // I(k0) part of the circle: k0 visible
    for (const Vec2& p : disk_reachable_gradients(kDisk, x)) CHECK(std::abs(dot(p, x)) < 1e-9);
  }
}

TEST_CASE("minimizer count is two exactly on the symmetry ray") {
  Rng rng(4);
  for (int k = 0; k < 2000; ++k) {
    const Vec2 x{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
    if (norm(x) <= 1.0 || distance(x, kDisk.k0) < 1e-6) continue;
    CHECK(disk_minimizers(kDisk, x).size() == 1);
  }
  for (double t = 1.0; t < 3.0; t += 0.1) {
    CHECK(disk_minimizers(kDisk, {-t, 0.0}).size() == 2);
    CHECK(on_disk_symmetry_ray(kDisk, {-t, 0.0}));
  }
}

TEST_CASE("involute curve and curvature") {
  const Vec2 c0 = involute_curve(1.0, 0.0);
  CHECK(c0.x == doctest::Approx(1.0));
  CHECK(c0.y == doctest::Approx(0.0));
  const Vec2 c1 = involute_curve(1.0, kPi / 2.0);
  CHECK(c1.x == doctest::Approx(kPi / 2.0));
  CHECK(c1.y == doctest::Approx(1.0));
  CHECK(involute_curve(2.0, 0.0).x == doctest::Approx(2.0));

  CHECK(involute_curvature(1.0, 0.5) == doctest::Approx(2.0));
  CHECK(involute_curvature(1.0, 1.0) == doctest::Approx(1.0));
  CHECK(involute_curvature(2.0, 0.25) == doctest::Approx(2.0));
  CHECK_THROWS_AS(involute_curvature(1.0, 0.0), Error);
  for (double R : {1.0, 2.0}) {
    for (double r = 0.1; r <= 2.0 + 1e-12; r += 0.05) {
      CHECK(involute_curvature_fd(R, r) == doctest::Approx(involute_curvature(R, r)).epsilon(0.01));
    }
  }
}

TEST_CASE("corollary scan") {
  const DiskScene ds{{0.0, 0.0}, 1.0, {-2.0, 0.0}};
  const CorollaryScan scan = corollary_defect_scan(ds, {0.0, 0.5, 0.9}, {0.1, 0.05, 0.025, 0.0125});
  REQUIRE(scan.summary.size() == 3);
  CHECK(scan.summary[1].bounded);
  CHECK(scan.summary[2].growth_slope == doctest::Approx(0.8).epsilon(0.02));
  // Per halving the ratio grows by about 2^0.8.
  const auto& rows = scan.rows;
  CHECK(rows[9].ratio / rows[8].ratio == doctest::Approx(std::pow(2.0, 0.8)).epsilon(0.01));
  // alpha = 0: the ratio decays as r -> 0.
  CHECK(rows[3].ratio < rows[0].ratio);
  CHECK(scan.summary[0].slope > 0.9);
  CHECK_THROWS_AS(corollary_defect_scan(kDisk, {0.5}, {0.1}), Error);
}
