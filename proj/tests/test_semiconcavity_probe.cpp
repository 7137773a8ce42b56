#include <doctest.h>

#include <cmath>

#include "odl/eikonal.hpp"
#include "odl/errors.hpp"
#include "odl/semiconcavity.hpp"

using namespace odl;

namespace {

Scene disk_scene() {
  return Scene(Obstacle::disk({0.0, 0.0}, 1.0), {2.0, 0.0}, Metric::identity(), Box{{-3.0, -3.0}, {3.0, 3.0}});
}

Scene free_scene() {
  return Scene(Obstacle::none(), {0.0, 0.0}, Metric::identity(), Box{{-1.5, -1.5}, {1.5, 1.5}});
}

}  // namespace

TEST_CASE("defect of an affine function vanishes") {
  const FieldView v = FieldView::synthetic([](Vec2 p) { return 3.0 * p.x - 2.0 * p.y + 1.0; });
  for (double lambda : {0.0, 0.25, 0.5, 0.9}) {
    const DefectSample s = sc_defect(v, {0.3, -0.2}, {-0.7, 0.4}, lambda);
    CHECK(std::abs(s.defect) < 1e-12);
    CHECK(s.separation == doctest::Approx(std::hypot(1.0, 0.6)));
  }
}

TEST_CASE("defect of a concave quadratic") {
  const FieldView v = FieldView::synthetic([](Vec2 p) { return -norm2(p); });
  const Vec2 x{0.5, 0.1}, y{-0.3, 0.7};
  CHECK(sc_defect(v, x, y, 0.5).defect == doctest::Approx(-norm2(x - y) / 4.0));
  CHECK(sc_defect(v, x, y, 0.2).defect == doctest::Approx(-0.2 * 0.8 * norm2(x - y)));
}

TEST_CASE("a ridge gives a negative defect") {
  const FieldView kink = FieldView::synthetic([](Vec2 p) { return -std::abs(p.x); });
  CHECK(sc_defect(kink, {-1.0, 0.0}, {1.0, 0.0}, 0.5).defect == doctest::Approx(-1.0));
  const FieldView oracle = FieldView::oracle(DiskScene{});
  CHECK(sc_defect(oracle, {-2.0, 0.1}, {-2.0, -0.1}, 0.5).defect < 0.0);
}

TEST_CASE("defect preconditions") {
  const FieldView oracle = FieldView::oracle(DiskScene{});
  CHECK_THROWS_AS(sc_defect(oracle, {-2.0, 0.0}, {2.5, 0.5}, 0.5), Error);
  CHECK_THROWS_AS(sc_defect(oracle, {-2.0, 0.5}, {-2.0, 0.6}, 1.5), Error);
  CHECK_THROWS_AS(sc_defect(oracle, {2.0, 0.0}, {2.5, 0.5}, 0.5), Error);
}

TEST_CASE("defect scales with the field") {
  const FieldView v = FieldView::oracle(DiskScene{});
  const Vec2 x{-2.0, 0.3}, y{-1.7, -0.4};
  CHECK(sc_defect(v.scaled(3.0), x, y, 0.4).defect == doctest::Approx(3.0 * sc_defect(v, x, y, 0.4).defect));
  CHECK_THROWS_AS(v.scaled(0.0), Error);
}

TEST_CASE("log-log line") {
  const LogFit f = fit_loglog({1.0, 2.0, 4.0, 8.0}, {3.0, 12.0, 48.0, 192.0});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(std::exp(f.intercept) == doctest::Approx(3.0));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK_THROWS_AS(fit_loglog({1.0}, {1.0}), Error);
}

TEST_CASE("synthetic quadratic has exponent one") {
  const Scene s = free_scene();
  const FieldView v = FieldView::synthetic([](Vec2 p) { return norm2(p); });
  const ExponentFit fit = fit_exponent(v, s, FitRegion::interior, Thresholds{});
  CHECK(fit.alpha_hat == doctest::Approx(1.0).epsilon(0.05));
  CHECK(fit.conclusive);

  const ExponentFit scaled = fit_exponent(v.scaled(5.0), s, FitRegion::interior, Thresholds{});
  CHECK(scaled.alpha_hat == doctest::Approx(fit.alpha_hat).epsilon(1e-9));
  CHECK(scaled.C_hat == doctest::Approx(5.0 * fit.C_hat).epsilon(1e-6));
}

TEST_CASE("oracle exponents on the disk") {
  const Scene s = disk_scene();
  const FieldView v = FieldView::oracle(DiskScene{});
  const Thresholds th;
  const ExponentFit bs = fit_exponent(v, s, FitRegion::boundary_S, th);
  CHECK(bs.conclusive);
  CHECK(bs.alpha_hat <= 0.6);
  const ExponentFit bi = fit_exponent(v, s, FitRegion::boundary_I, th);
  CHECK(bi.alpha_hat >= 0.9);
  const ExponentFit in = fit_exponent(v, s, FitRegion::interior, th);
  CHECK(in.alpha_hat >= 0.9);
  // Same seed, same pairs.
  CHECK(fit_exponent(v, s, FitRegion::boundary_S, th).alpha_hat == bs.alpha_hat);
}

TEST_CASE("region names") {
  CHECK(fit_region_from_string("boundary_S") == FitRegion::boundary_S);
  CHECK(std::string(to_string(FitRegion::boundary_I)) == "boundary_I");
  CHECK_THROWS_AS(fit_region_from_string("edge"), Error);
  CHECK_THROWS_AS(fit_exponent(FieldView::synthetic([](Vec2 p) { return p.x; }), free_scene(), FitRegion::boundary_S,
                               Thresholds{}),
                  Error);
}

TEST_CASE("exponent map window") {
  const Scene s = free_scene();
  const DistanceField f = solve_isotropic_fmm(s, 0.02);
  const FieldView v = FieldView::grid(f, s);
  CHECK_THROWS_AS(exponent_map(v, s, 0.1, Thresholds{}), Error);
  const ExponentMap m = exponent_map(v, s, 1.0, Thresholds{});
  CHECK(m.nx > 0);
  CHECK(m.alpha.size() == static_cast<std::size_t>(m.nx * m.ny));
}
