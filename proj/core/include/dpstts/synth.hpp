#pragma once

#include <cstdint>

#include "dpstts/ingest.hpp"
#include "dpstts/model.hpp"

namespace dpstts {

struct GenerationConfig {
  std::uint64_t count = 1;   // number of synthetic trajectories
  std::int32_t max_len = 125;  // cube cap per trajectory
  std::uint64_t seed = 0;

  void validate() const;  // throws InvalidConfig
};

/// Samples trajectories from a model: start cube from the start distribution,
/// then repeated draws from the current cube's transition row until the stop
/// symbol, an all-zero row, or max_len cubes. Caches the start CDF, so reuse
/// one generator per model.
class TrajectoryGenerator {
 public:
  explicit TrajectoryGenerator(const SynthModel& model);

  CubeTrajectory generate(std::int32_t max_len, NoiseSource& rng) const;

 private:
  const SynthModel* model_;
  std::vector<double> start_cdf_;
  std::size_t last_positive_ = 0;
};

/// One-shot convenience wrapper around TrajectoryGenerator.
CubeTrajectory generate_cube_trajectory(const SynthModel& model,
                                        std::int32_t max_len, NoiseSource& rng);

/// cfg.count trajectories materialized as GPS points through the cube
/// centers; ids are "syn-<index>". Trajectory i draws from noise stream
/// generation_base + i, so the output is deterministic under the seed and
/// independent of evaluation order.
RawDataset generate_dataset(const SynthModel& model, const GenerationConfig& cfg);

}  // namespace dpstts
