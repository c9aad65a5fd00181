// Serial reference against the OpenMP version of each parallel kernel. The
// benchmark argument selects the mode: 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include <vector>

#include "flab/box_dimension.hpp"
#include "flab/branching.hpp"
#include "flab/gosper.hpp"
#include "flab/montecarlo.hpp"
#include "flab/paths.hpp"
#include "flab/raster.hpp"
#include "flab/tst.hpp"

using namespace flab;

namespace {

Exec mode(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

void label(benchmark::State& state) { state.SetLabel(state.range(0) ? "parallel" : "serial"); }

void BM_count_boxes(benchmark::State& state) {
  static const CellList K = rasterize_cells(sample_bm(1'000'000, 1e-6, 1).points, Grid{1e-4, {0, 0}});
  for (auto _ : state) benchmark::DoNotOptimize(count_boxes(K, 8e-4, mode(state)));
  label(state);
}

void BM_sample_bm(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sample_bm(1'000'000, 1e-6, 7, mode(state)).points.data());
  label(state);
}

void BM_tst_sum(benchmark::State& state) {
  static const std::vector<Point> E = boundary_polygon(7).vertices;
  for (auto _ : state) benchmark::DoNotOptimize(tst_sum(E, 9, {20'000'000, mode(state)}).sum);
  label(state);
}

void BM_simulate_branching(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(simulate_branching({0, 2, 1.5}, 20000, 3, 200, 10'000, mode(state)).extinct);
  label(state);
}

void BM_percolation_survival(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(percolation_survival(2, 20, 0.6, 10000, 5, mode(state)).survived);
  label(state);
}

void BM_srw_outer_boundary(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(srw_outer_boundary({4096, 16384}, 40, 9, mode(state)).size());
  label(state);
}

}  // namespace

BENCHMARK(BM_count_boxes)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sample_bm)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_tst_sum)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_simulate_branching)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_percolation_survival)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_srw_outer_boundary)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
