#include <doctest.h>

#include <cmath>

#include "odl/disk_oracle.hpp"
#include "odl/eikonal.hpp"
#include "odl/energy.hpp"
#include "odl/errors.hpp"
#include "odl/minimizer.hpp"
#include "odl/random.hpp"

using namespace odl;

namespace {

const DiskScene kDisk{{0.0, 0.0}, 1.0, {2.0, 0.0}};

Scene disk_scene() {
  return Scene(Obstacle::disk({0.0, 0.0}, 1.0), {2.0, 0.0}, Metric::identity(), Box{{-3.0, -3.0}, {3.0, 3.0}});
}

Scene free_scene(Metric m = Metric::identity()) {
  return Scene(Obstacle::none(), {0.0, 0.0}, std::move(m), Box{{-1.5, -1.5}, {1.5, 1.5}});
}

const DistanceField& disk_field() {
  static const DistanceField f = solve_isotropic_fmm(disk_scene(), 0.005);
  return f;
}

}  // namespace

TEST_CASE("free-space trace is straight") {
  const Scene s = free_scene();
  const DistanceField f = solve_isotropic_fmm(s, 0.01);
  const MinimizerPath p = backtrace_minimizer(f, s, {1.0, 0.0});
  CHECK(p.reached_target);
  CHECK(p.tau == doctest::Approx(1.0).epsilon(0.02));
  for (const Vec2& q : p.points) CHECK(std::abs(q.y) < 0.02);
  CHECK(p.contact_intervals.empty());
  CHECK(distance(p.points.front(), {1.0, 0.0}) <= 0.02);
  CHECK(distance(p.points.back(), s.k0()) <= 0.02);
}

TEST_CASE("trace around the disk") {
  const Scene s = disk_scene();
  const DistanceField& f = disk_field();
  const double h = f.grid.h;
  const MinimizerPath p = backtrace_minimizer(f, s, {-2.0, 0.1});
  CHECK(p.reached_target);
  CHECK(p.contact_intervals.size() == 1);
  CHECK(p.tau == doctest::Approx(disk_distance(kDisk, {-2.0, 0.1})).epsilon(0.03));
  // Hugging the upper arc.
  const auto [a, b] = p.contact_intervals.front();
  for (std::size_t k = a; k <= b; ++k) CHECK(p.points[k].y > 0.0);
  for (std::size_t k = 1; k < p.points.size(); ++k) CHECK(distance(p.points[k - 1], p.points[k]) <= 0.5 * h + 1e-9 + (k + 1 == p.points.size() ? 4.0 * h : 0.0));
  CHECK(p.tau >= distance({-2.0, 0.1}, s.k0()));
}

TEST_CASE("two traces from the singular ray") {
  const Scene s = disk_scene();
  const DistanceField& f = disk_field();
  const double h = f.grid.h;
  const MinimizerPath up = backtrace_minimizer(f, s, {-2.0, h});
  const MinimizerPath down = backtrace_minimizer(f, s, {-2.0, -h});
  CHECK(up.tau == doctest::Approx(down.tau).epsilon(0.03));
  CHECK(up.points[up.points.size() / 2].y > 0.5);
  CHECK(down.points[down.points.size() / 2].y < -0.5);
}

TEST_CASE("contact tangency over a ring of starts") {
  const Scene s = disk_scene();
  const DistanceField& f = disk_field();
  for (int k = 0; k < 18; ++k) {
    const Vec2 x = 2.5 * unit_at_angle(kPi / 2.0 + kPi * (k + 0.5) / 18.0);
    const MinimizerPath p = backtrace_minimizer(f, s, x);
    CHECK(contact_normal_component(s, p) <= 0.05);
    CHECK(p.tau == doctest::Approx(disk_distance(kDisk, x)).epsilon(0.03));
  }
}

TEST_CASE("field values are affine in arc length along a trace") {
  const Scene s = disk_scene();
  const DistanceField& f = disk_field();
  const Vec2 x{-2.2, 0.7};
  const MinimizerPath p = backtrace_minimizer(f, s, x);
  const double d0 = f.sample_available(x);
  double t = 0.0;
  for (std::size_t k = 1; k + 1 < p.points.size(); ++k) {
    t += distance(p.points[k - 1], p.points[k]);
    const double v = f.sample_available(p.points[k]);
    if (!std::isfinite(v)) continue;
    CHECK(std::abs(v - (d0 - t)) <= 0.03 * d0);
  }
}

TEST_CASE("trace preconditions") {
  const Scene s = disk_scene();
  CHECK_THROWS_AS(backtrace_minimizer(disk_field(), s, {0.0, 0.0}), Error);
}

TEST_CASE("path length") {
  CHECK(path_length(std::vector<Vec2>{{0, 0}, {1, 0}}, Metric::identity()) == doctest::Approx(1.0));
  CHECK(path_length(std::vector<Vec2>{{0, 0}, {1, 0}}, Metric::constant(Mat2::diag(4.0, 1.0))) == doctest::Approx(2.0));
  std::vector<Vec2> semi;
  for (int k = 0; k <= 180; ++k) semi.push_back(unit_at_angle(kPi * k / 180.0));
  CHECK(std::abs(path_length(semi, Metric::identity()) - kPi) < 1e-4);
}

TEST_CASE("energy minimization") {
  const EnergyResult e1 = minimize_energy(free_scene(), {1.0, 0.0}, 64);
  CHECK(e1.E_value == doctest::Approx(1.0).epsilon(0.01));
  CHECK(e1.converged);

  const EnergyResult e2 = minimize_energy(disk_scene(), {-2.0, 0.0}, 128);
  const double d = 2.0 * std::sqrt(3.0) + kPi / 3.0;
  CHECK(e2.E_value == doctest::Approx(d * d).epsilon(0.02));
  CHECK(e2.E_value == doctest::Approx(20.352).epsilon(0.02));
  CHECK(std::sqrt(e2.E_value) >= distance({-2.0, 0.0}, {2.0, 0.0}));
  for (const Vec2& q : e2.path.points) CHECK(norm(q) >= 1.0 - 1e-6);

  const EnergyResult e3 = minimize_energy(free_scene(Metric::constant(Mat2::diag(4.0, 1.0))), {1.0, 0.0}, 64);
  CHECK(e3.E_value == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("energy descent never increases the energy") {
  const Scene s = disk_scene();
  const std::vector<Vec2> straight{{-2.0, 0.0}, {2.0, 0.0}};
  EnergyOptions short_run;
  short_run.max_iters = 5;
  const EnergyResult a = minimize_energy(s, {-2.0, 0.5}, 64, short_run);
  short_run.max_iters = 50;
  const EnergyResult b = minimize_energy(s, {-2.0, 0.5}, 64, short_run);
  CHECK(b.E_value <= a.E_value);
}

TEST_CASE("energy against the field") {
  const Scene fs = free_scene();
  const DistanceField ff = solve_isotropic_fmm(fs, 0.01);
  Rng rng(1);
  std::vector<Vec2> pts;
  while (pts.size() < 20) {
    const Vec2 x{rng.uniform(-1.4, 1.4), rng.uniform(-1.4, 1.4)};
    if (norm(x) > 0.2) pts.push_back(x);
  }
  const EnergyCheck free_check = energy_distance_check(fs, ff, pts, 64, 0.1);
  CHECK(free_check.evaluated == 20);
  CHECK(free_check.max_rel_gap <= 0.02);

  const Scene s = disk_scene();
  const DistanceField& f = disk_field();
  std::vector<Vec2> shadow;
  while (shadow.size() < 20) {
    const Vec2 x{rng.uniform(-2.9, 2.9), rng.uniform(-2.9, 2.9)};
    if (norm(x) > 1.02 && classify_region(s, x) == Region::S) shadow.push_back(x);
  }
  const EnergyCheck sc = energy_distance_check(s, f, shadow, 128, f.init_radius);
  CHECK(sc.evaluated == 20);
  CHECK(sc.max_rel_gap <= 0.03);
  for (const EnergyCheckRow& r : sc.rows) CHECK(r.sqrt_E >= 0.97 * r.d_field);

  const EnergyCheck near = energy_distance_check(s, f, {{2.001, 0.0}}, 64, f.init_radius);
  REQUIRE(near.rows.size() == 1);
  CHECK(near.rows[0].skipped);
  CHECK(near.rows[0].reason == "near_target");
}
