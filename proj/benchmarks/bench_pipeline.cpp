#include <benchmark/benchmark.h>

#include <random>

#include "dpstts/metrics.hpp"
#include "dpstts/model.hpp"
#include "dpstts/synth.hpp"

using namespace dpstts;

namespace {

const SpatioTemporalDomain kDom{-8.665, -8.528, 41.104, 41.250,
                                14 * 3600.0, 18 * 3600.0};
const GridSpec kGrid{20, 20, 16, 2};

RawDataset make_walks(int count, int points) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ulon(kDom.left, kDom.right);
  std::uniform_real_distribution<double> ulat(kDom.bottom, kDom.top);
  std::uniform_real_distribution<double> step(-0.004, 0.004);
  RawDataset ds;
  for (int i = 0; i < count; ++i) {
    RawTrajectory tr;
    tr.id = "w" + std::to_string(i);
    double lon = ulon(rng), lat = ulat(rng);
    double t = kDom.s_time + (i % 200) * 60.0;
    for (int k = 0; k < points; ++k) {
      tr.points.push_back({lon, lat, t});
      lon = std::clamp(lon + step(rng), kDom.left, kDom.right);
      lat = std::clamp(lat + step(rng), kDom.bottom, kDom.top);
      t += 15.0;
    }
    ds.trajectories.push_back(std::move(tr));
  }
  return ds;
}

std::vector<CubeTrajectory> discretized(const RawDataset& ds) {
  std::vector<CubeTrajectory> cubes;
  cubes.reserve(ds.trajectories.size());
  for (const auto& tr : ds.trajectories) {
    cubes.push_back(discretize_trajectory(tr.points, kDom, kGrid));
  }
  return cubes;
}

void BM_DiscretizeTrajectory(benchmark::State& state) {
  const RawDataset ds = make_walks(static_cast<int>(state.range(0)), 40);
  for (auto _ : state) {
    for (const auto& tr : ds.trajectories) {
      benchmark::DoNotOptimize(discretize_trajectory(tr.points, kDom, kGrid));
    }
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DiscretizeTrajectory)->Arg(100)->Arg(1000);

void BM_BuildModel(benchmark::State& state) {
  const auto cubes = discretized(make_walks(static_cast<int>(state.range(0)), 40));
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_model(cubes, kDom, kGrid, 1.0, 0.5, 7, "bench"));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildModel)->Arg(1000)->Arg(5000);

void BM_GenerateDataset(benchmark::State& state) {
  const auto cubes = discretized(make_walks(2000, 40));
  const SynthModel model = build_model(cubes, kDom, kGrid, 1.0, 0.5, 7, "bench");
  GenerationConfig cfg;
  cfg.count = static_cast<std::uint64_t>(state.range(0));
  cfg.max_len = 125;
  cfg.seed = 9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(generate_dataset(model, cfg));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GenerateDataset)->Arg(1000)->Arg(10000);

void BM_KendallTau(benchmark::State& state) {
  std::mt19937_64 rng(3);
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> a(n), b(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = static_cast<double>(rng() % 1000);
    b[i] = static_cast<double>(rng() % 1000);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(kendall_tau(a, b));
  }
}
BENCHMARK(BM_KendallTau)->Arg(400)->Arg(4000)->Arg(40000);

void BM_MinePatterns(benchmark::State& state) {
  const RawDataset ds = make_walks(static_cast<int>(state.range(0)), 40);
  const EvalGrid grid{20, 20};
  for (auto _ : state) {
    benchmark::DoNotOptimize(mine_top_k_patterns(ds, kDom, grid, 200, 2, 8));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MinePatterns)->Arg(1000)->Arg(5000);

}  // namespace

BENCHMARK_MAIN();
