#include "dpstts/synth.hpp"

#include <algorithm>
#include <string>

namespace dpstts {

void GenerationConfig::validate() const {
  if (count < 1) {
    throw InvalidConfig("generation count must be >= 1");
  }
  if (max_len < 1) {
    throw InvalidConfig("max_len must be >= 1");
  }
}

TrajectoryGenerator::TrajectoryGenerator(const SynthModel& model)
    : model_(&model) {
  start_cdf_.reserve(model.start.mass.size());
  double cum = 0.0;
  for (std::size_t i = 0; i < model.start.mass.size(); ++i) {
    cum += model.start.mass[i];
    start_cdf_.push_back(cum);
    if (model.start.mass[i] > 0.0) {
      last_positive_ = i;
    }
  }
  if (start_cdf_.empty() || !(cum > 0.0)) {
    throw InvalidConfig("model start distribution carries no mass");
  }
}

CubeTrajectory TrajectoryGenerator::generate(std::int32_t max_len,
                                             NoiseSource& rng) const {
  const double u = rng.next_uniform();
  auto it = std::upper_bound(start_cdf_.begin(), start_cdf_.end(), u);
  std::size_t idx = it == start_cdf_.end()
                        ? last_positive_  // floating dust at the tail
                        : static_cast<std::size_t>(it - start_cdf_.begin());

  CubeTrajectory tr;
  tr.terminated = true;
  tr.cubes.push_back(cube_from_id(static_cast<std::uint32_t>(idx), model_->grid));
  while (static_cast<std::int32_t>(tr.cubes.size()) < max_len) {
    const std::uint32_t row_id = cube_id(tr.cubes.back(), model_->grid);
    const TransitionRow& row = model_->tm.rows[row_id];
    if (row.all_zero || row.probs.empty()) {
      break;  // forced stop
    }
    const double draw = rng.next_uniform();
    double cum = 0.0;
    std::uint32_t col = row.probs.back().first;
    for (const auto& [candidate, p] : row.probs) {
      cum += p;
      if (draw < cum) {
        col = candidate;
        break;
      }
    }
    if (col == model_->tm.stop_column) {
      break;
    }
    tr.cubes.push_back(cube_from_id(col, model_->grid));
  }
  return tr;
}

CubeTrajectory generate_cube_trajectory(const SynthModel& model,
                                        std::int32_t max_len, NoiseSource& rng) {
  return TrajectoryGenerator(model).generate(max_len, rng);
}

RawDataset generate_dataset(const SynthModel& model, const GenerationConfig& cfg) {
  cfg.validate();
  const TrajectoryGenerator generator(model);
  RawDataset out;
  out.source = "synthetic";
  out.trajectories.resize(cfg.count);
  for (std::uint64_t i = 0; i < cfg.count; ++i) {
    NoiseSource rng(cfg.seed, noise_stream::generation_base + i);
    const CubeTrajectory ct = generator.generate(cfg.max_len, rng);
    RawTrajectory& tr = out.trajectories[i];
    tr.id = "syn-" + std::to_string(i);
    tr.points.reserve(ct.cubes.size());
    for (const Cube& c : ct.cubes) {
      tr.points.push_back(cube_center(c, model.domain, model.grid));
    }
  }
  return out;
}

}  // namespace dpstts
