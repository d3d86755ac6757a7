#include <benchmark/benchmark.h>

#include <vector>

#include "sapa/qram.hpp"
#include "sapa/scenario.hpp"

namespace {

sapa::Task sample_task() {
  sapa::SceneConfig cfg;
  cfg.n_targets = 1;
  cfg.seed = 7;
  const auto scene = sapa::generate_scene(cfg);
  return {scene.tasks[0].env, 0.005};
}

void BM_EnumerateSplitGrid(benchmark::State& state) {
  const auto grid = sapa::ControlGrid::reference_split();
  const auto task = sample_task();
  for (auto _ : state) {
    benchmark::DoNotOptimize(sapa::enumerate_setpoints(task, grid, {}, {}));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(grid.size()));
}
BENCHMARK(BM_EnumerateSplitGrid)->Unit(benchmark::kMillisecond);

void BM_BuildMajorant(benchmark::State& state) {
  const auto points = sapa::enumerate_setpoints(sample_task(), sapa::ControlGrid::reference_split(), {}, {});
  for (auto _ : state) benchmark::DoNotOptimize(sapa::build_majorant(points));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(points.size()));
}
BENCHMARK(BM_BuildMajorant)->Unit(benchmark::kMillisecond);

void BM_FastTraversalMajorant(benchmark::State& state) {
  const auto points = sapa::enumerate_setpoints(sample_task(), sapa::ControlGrid::reference_split(), {}, {});
  for (auto _ : state) benchmark::DoNotOptimize(sapa::fast_traversal_majorant(points));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(points.size()));
}
BENCHMARK(BM_FastTraversalMajorant)->Unit(benchmark::kMillisecond);

void BM_Allocate200Tasks(benchmark::State& state) {
  sapa::SceneConfig cfg;
  cfg.seed = 11;
  const auto scene = sapa::generate_scene(cfg);
  const auto grid = sapa::ControlGrid::reference_full();
  std::vector<sapa::ConcaveMajorant> majorants;
  for (const auto& t : scene.tasks) {
    majorants.push_back(sapa::build_majorant(sapa::enumerate_setpoints({t.env, t.weight}, grid, {}, {})));
  }
  const double budget = static_cast<double>(state.range(0)) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(sapa::allocate(majorants, budget));
}
BENCHMARK(BM_Allocate200Tasks)->Arg(10)->Arg(40)->Arg(100);

}  // namespace
