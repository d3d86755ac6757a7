#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "sapa/radar_model.hpp"

namespace {

void BM_TrackSharpness(benchmark::State& state) {
  // Log-spaced (alpha, beta) pairs spanning the range seen in practice.
  std::vector<std::pair<double, double>> pairs;
  for (int i = 0; i < 64; ++i) {
    for (int j = 0; j < 16; ++j) {
      pairs.emplace_back(std::pow(10.0, -1.0 + 3.0 * i / 63.0), std::pow(10.0, 1.0 + 3.0 * j / 15.0));
    }
  }
  std::size_t k = 0;
  for (auto _ : state) {
    const auto& [a, b] = pairs[k++ % pairs.size()];
    benchmark::DoNotOptimize(sapa::track_sharpness(a, b));
  }
}
BENCHMARK(BM_TrackSharpness);

void BM_Evaluate(benchmark::State& state) {
  const sapa::RadarConstants consts;
  const sapa::UtilityShape shape;
  const sapa::Environment env{40e3, 0.3, 1.0, 20.0, 15.0};
  double t_d = 0.004;
  for (auto _ : state) {
    const sapa::ControlPoint cp{t_d, 1.0, 24};
    benchmark::DoNotOptimize(sapa::evaluate(cp, env, consts, shape));
    t_d = t_d > 0.064 ? 0.004 : t_d + 0.0006;
  }
}
BENCHMARK(BM_Evaluate);

}  // namespace
