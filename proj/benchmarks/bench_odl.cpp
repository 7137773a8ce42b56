#include <benchmark/benchmark.h>

#include "odl/eikonal.hpp"
#include "odl/semiconcavity.hpp"
#include "odl/singularity.hpp"

using namespace odl;

namespace {

Scene disk_scene(Metric m = Metric::identity()) {
  return Scene(Obstacle::disk({0.0, 0.0}, 1.0), {2.0, 0.0}, std::move(m), Box{{-3.0, -3.0}, {3.0, 3.0}});
}

void BM_fmm_disk(benchmark::State& state) {
  const Scene s = disk_scene();
  const double h = 6.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_isotropic_fmm(s, h).values.data());
  state.SetComplexityN(state.range(0) * state.range(0));
}
BENCHMARK(BM_fmm_disk)->Arg(150)->Arg(300)->Arg(600)->Unit(benchmark::kMillisecond)->Complexity();

void BM_graph_anisotropic(benchmark::State& state) {
  const Scene s = disk_scene(Metric::constant(Mat2::diag(4.0, 1.0)));
  const double h = 6.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_anisotropic_graph(s, h).values.data());
}
BENCHMARK(BM_graph_anisotropic)->Arg(150)->Arg(300)->Unit(benchmark::kMillisecond);

void BM_reachable_gradients(benchmark::State& state) {
  const Scene s = disk_scene();
  const DistanceField f = solve_isotropic_fmm(s, 0.01);
  const Thresholds th;
  for (auto _ : state) benchmark::DoNotOptimize(reachable_gradients_numeric(f, s, {-2.0, 0.0}, th).min_norm_point);
}
BENCHMARK(BM_reachable_gradients)->Unit(benchmark::kMicrosecond);

void BM_exponent_fit_oracle(benchmark::State& state) {
  const Scene s = disk_scene();
  const FieldView v = FieldView::oracle(DiskScene{});
  const Thresholds th;
  FitOptions opt;
  opt.n_pairs = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fit_exponent(v, s, FitRegion::boundary_S, th, opt).alpha_hat);
}
BENCHMARK(BM_exponent_fit_oracle)->Arg(1000)->Arg(4000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
