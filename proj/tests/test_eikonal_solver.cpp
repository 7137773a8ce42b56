#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>

#include "odl/disk_oracle.hpp"
#include "odl/eikonal.hpp"
#include "odl/errors.hpp"
#include "odl/field_io.hpp"

using namespace odl;

namespace {

const DiskScene kDisk{{0.0, 0.0}, 1.0, {2.0, 0.0}};

Scene disk_scene() {
  return Scene(Obstacle::disk({0.0, 0.0}, 1.0), {2.0, 0.0}, Metric::identity(), Box{{-3.0, -3.0}, {3.0, 3.0}});
}

Scene free_scene(Metric m = Metric::identity()) {
  return Scene(Obstacle::none(), {0.0, 0.0}, std::move(m), Box{{-1.0, -1.0}, {1.0, 1.0}});
}

double max_oracle_error(const DistanceField& f) {
  double worst = 0.0;
  for (std::size_t idx = 0; idx < f.grid.size(); ++idx) {
    if (f.grid.mask[idx] != CellType::free || !std::isfinite(f.values[idx])) continue;
    worst = std::max(worst, std::abs(f.values[idx] - disk_distance(kDisk, f.grid.point(idx))));
  }
  return worst;
}

}  // namespace

TEST_CASE("free-space fast marching reproduces the norm") {
  const double h = 0.01;
  const DistanceField f = solve_isotropic_fmm(free_scene(), h);
  double worst = 0.0;
  for (std::size_t idx = 0; idx < f.grid.size(); ++idx) worst = std::max(worst, std::abs(f.values[idx] - norm(f.grid.point(idx))));
  CHECK(worst <= 2.0 * h);
  CHECK(f.monotonicity_violations == 0);
  CHECK(f.unreachable == 0);
  int i, j;
  f.grid.nearest({0.0, 0.0}, i, j);
  CHECK(f.at(i, j) <= h);
}

TEST_CASE("disk fast marching against the oracle") {
  const double h = 0.005;
  const DistanceField f = solve_isotropic_fmm(disk_scene(), h);
  CHECK(max_oracle_error(f) <= 5.0 * h);
  CHECK(std::abs(f.sample({-2.0, 0.0}) - 4.511299) <= 5.0 * h);
  CHECK(f.monotonicity_violations == 0);
  for (std::size_t idx = 0; idx < f.grid.size(); ++idx) {
    if (f.grid.mask[idx] == CellType::obstacle) CHECK(std::isinf(f.values[idx]));
  }
}

TEST_CASE("first-order convergence on the disk") {
  const double e1 = max_oracle_error(solve_isotropic_fmm(disk_scene(), 0.02));
  const double e2 = max_oracle_error(solve_isotropic_fmm(disk_scene(), 0.01));
  CHECK(e1 / e2 >= 1.5);
  CHECK(e1 / e2 <= 3.0);
}

TEST_CASE("acceptance order is nondecreasing") {
  const DistanceField f = solve_isotropic_fmm(disk_scene(), 0.02);
  double last = -1.0;
  for (std::uint32_t idx : f.order) {
    CHECK(f.values[idx] >= last - 1e-12);
    last = f.values[idx];
  }
}

TEST_CASE("adding an obstacle never decreases the distance") {
  const Box box{{-3.0, -3.0}, {3.0, 3.0}};
  const DistanceField open = solve_isotropic_fmm(Scene(Obstacle::none(), {2.0, 0.0}, Metric::identity(), box), 0.02);
  const DistanceField blocked = solve_isotropic_fmm(disk_scene(), 0.02);
  for (std::size_t idx = 0; idx < open.grid.size(); ++idx) CHECK(blocked.values[idx] >= open.values[idx] - 1e-12);
}

TEST_CASE("isotropic metric scales distances") {
  const DistanceField f = solve_isotropic_fmm(free_scene(Metric::isotropic(4.0)), 0.01);
  CHECK(f.sample({0.5, 0.0}) == doctest::Approx(1.0).epsilon(0.03));
  CHECK_THROWS_AS(solve_isotropic_fmm(free_scene(Metric::constant(Mat2::diag(4.0, 1.0))), 0.01), Error);
}

TEST_CASE("graph solver") {
  const DistanceField fmm = solve_isotropic_fmm(free_scene(), 0.02);
  const DistanceField graph = solve_anisotropic_graph(free_scene(), 0.02);
  for (std::size_t idx = 0; idx < fmm.grid.size(); ++idx) {
    if (fmm.values[idx] < 0.1) continue;
    CHECK(std::abs(graph.values[idx] - fmm.values[idx]) / fmm.values[idx] <= 0.03);
  }
  const DistanceField diag = solve_anisotropic_graph(free_scene(Metric::constant(Mat2::diag(4.0, 1.0))), 0.02);
  CHECK(diag.sample({1.0, 0.0}) == doctest::Approx(2.0).epsilon(0.03));
  const DistanceField disk = solve_anisotropic_graph(disk_scene(), 0.01);
  CHECK(disk.sample({-2.0, 0.0}) == doctest::Approx(4.511299).epsilon(0.03));
  CHECK_THROWS_AS(solve_anisotropic_graph(free_scene(Metric::constant(Mat2::diag(20.0, 1.0))), 0.05), Error);
}

TEST_CASE("nodal and point gradients") {
  const double h = 0.01;
  const DistanceField f = solve_isotropic_fmm(free_scene(), h);
  const GradientEstimate g = numeric_gradient(f, {0.5, 0.0});
  CHECK(norm(g.g - Vec2{1.0, 0.0}) <= 5.0 * h);

  const DistanceField d = solve_isotropic_fmm(disk_scene(), 0.005);
  CHECK(std::abs(norm(numeric_gradient(d, {-2.0, 1.5}).g) - 1.0) <= 0.05);

  // A free node right next to the obstacle gets a finite one-sided estimate.
  int i, j;
  d.grid.nearest({-1.0, 0.0}, i, j);
  while (d.grid.type(i, j) == CellType::obstacle) --i;
  const GradientEstimate gb = nodal_gradient(d, i, j);
  CHECK(std::isfinite(gb.g.x));
  CHECK(std::isfinite(gb.g.y));
  CHECK(gb.one_sided);
  CHECK_THROWS_AS(nodal_gradient(d, i + 1, j), Error);
}

TEST_CASE("eikonal residual") {
  const DistanceField f = solve_isotropic_fmm(free_scene(), 0.01);
  Thresholds th;
  const std::vector<std::uint8_t> none(f.grid.size(), 0);
  const ResidualStats rs = eikonal_residual(f, Metric::identity(), residual_exclusion(f, free_scene(), none, th));
  CHECK(rs.median <= 0.02);
  CHECK(rs.count > 0);
}

TEST_CASE("field artifacts") {
  const DistanceField f = solve_isotropic_fmm(disk_scene(), 0.05);
  const std::string bin = field_to_binary(f);
  CHECK(bin.substr(0, 4) == "ODLF");
  CHECK(bin.size() == 40 + f.grid.size() * 9);
  const DistanceField back = field_from_binary(bin);
  REQUIRE(back.values.size() == f.values.size());
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    CHECK(std::memcmp(&back.values[k], &f.values[k], sizeof(double)) == 0);
  }
  CHECK(field_to_binary(back) == bin);
  CHECK_THROWS_AS(field_from_binary(bin.substr(0, 20)), Error);
  CHECK_THROWS_AS(field_from_binary("XXXX" + bin.substr(4)), Error);

  const std::string csv = field_to_csv(f);
  CHECK(csv.rfind("x,y,d\n", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == f.grid.size() + 1);
  CHECK(csv.find("inf") != std::string::npos);
}

TEST_CASE("grid preconditions") {
  CHECK_THROWS_AS(solve_isotropic_fmm(free_scene(), 0.0), Error);
  CHECK_THROWS_AS(solve_isotropic_fmm(free_scene(), 0.5), Error);
}
