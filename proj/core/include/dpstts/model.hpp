#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dpstts/dp.hpp"
#include "dpstts/errors.hpp"
#include "dpstts/grid.hpp"

namespace dpstts {

inline constexpr int kModelFormatVersion = 1;

/// Start-cube mass indexed by linear cube id; normalized to sum 1.
struct StartDistribution {
  std::vector<double> mass;

  friend bool operator==(const StartDistribution&,
                         const StartDistribution&) = default;
};

/// Sparse 2-gram frequency matrix. Row i may only hold columns inside its
/// support: neighbors(st_i) plus the stop column (== cube count); everything
/// else is structurally zero and never materialized.
struct FrequencyMatrix {
  std::vector<std::map<std::uint32_t, double>> rows;
  std::uint32_t stop_column = 0;

  friend bool operator==(const FrequencyMatrix&,
                         const FrequencyMatrix&) = default;
};

struct TransitionRow {
  /// (column id, probability) in ascending column order; stop column last.
  std::vector<std::pair<std::uint32_t, double>> probs;
  bool all_zero = false;

  friend bool operator==(const TransitionRow&, const TransitionRow&) = default;
};

/// Row-normalized transition probabilities over the same support as the
/// frequency matrix. All-zero rows are retained and act as a forced stop.
struct TransitionMatrix {
  std::vector<TransitionRow> rows;
  std::uint32_t stop_column = 0;

  friend bool operator==(const TransitionMatrix&,
                         const TransitionMatrix&) = default;
};

struct ModelMetadata {
  std::uint64_t seed = 0;
  std::uint64_t source_size = 0;  // |D_a| the model was built from
  std::string source;
  bool time_of_day = false;  // domain times are seconds-of-day

  friend bool operator==(const ModelMetadata&, const ModelMetadata&) = default;
};

/// The serializable DP-STTS model bundle.
struct SynthModel {
  SpatioTemporalDomain domain;
  GridSpec grid;
  StartDistribution start;
  TransitionMatrix tm;
  PrivacyBudget budget;
  ModelMetadata metadata;

  friend bool operator==(const SynthModel&, const SynthModel&) = default;
};

/// Per-cube counts of trajectories starting there. Sums to the dataset size.
std::vector<std::int64_t> count_starts(const std::vector<CubeTrajectory>& da,
                                       const GridSpec& grid);

/// Adds Lap(1/eps_s) to every count (sensitivity 1), clamps negatives to
/// zero and normalizes. Falls back to uniform if everything clamps to zero.
/// eps_s == kNoiseOff skips the noise step.
StartDistribution noisy_start_distribution(const std::vector<std::int64_t>& counts,
                                           double eps_s, NoiseSource& rng);

/// 2-gram frequencies: a trajectory of L cubes contributes 1/L to each of its
/// L 2-grams (L-1 cube transitions plus the final cube->stop), so every
/// trajectory adds total mass exactly 1. Throws NonNeighborTransition when a
/// trajectory breaks the neighbor chain.
FrequencyMatrix build_frequency_matrix(const std::vector<CubeTrajectory>& da,
                                       const GridSpec& grid);

/// Adds Lap(1/eps_m) to every cell of every row's support, including cells
/// the data never touched; cells outside the support stay exactly zero.
/// eps_m == kNoiseOff returns the input unchanged.
FrequencyMatrix add_fm_noise(const FrequencyMatrix& fm, double eps_m,
                             NoiseSource& rng, const GridSpec& grid);

/// Per row: clamp negatives to zero and divide by the row sum; rows that sum
/// to zero are marked all_zero.
TransitionMatrix derive_transition_matrix(const FrequencyMatrix& fm_noisy);

/// Full model construction: budget split, noisy start distribution (stream
/// noise_stream::start_counts) and noisy Markov process (stream
/// noise_stream::frequency_matrix), both derived from `seed`.
SynthModel build_model(const std::vector<CubeTrajectory>& da,
                       const SpatioTemporalDomain& domain, const GridSpec& grid,
                       double epsilon, double delta_split, std::uint64_t seed,
                       std::string source = {}, bool time_of_day = false);

/// Canonical JSON with exact (round-trip) number formatting; byte-identical
/// for equal models.
std::string serialize_model(const SynthModel& model);

/// Throws CorruptModelFile on malformed input and VersionMismatch when the
/// format version differs.
SynthModel deserialize_model(const std::string& text);

void save_model(const SynthModel& model, const std::string& path);
SynthModel load_model(const std::string& path);

}  // namespace dpstts
