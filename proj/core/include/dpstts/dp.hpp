#pragma once

#include <cstdint>
#include <limits>

#include "dpstts/errors.hpp"

namespace dpstts {

/// Sentinel epsilon that disables noise entirely (Lap scale 1/inf == 0).
inline constexpr double kNoiseOff = std::numeric_limits<double>::infinity();

inline bool is_noise_off(double epsilon) {
  return epsilon == kNoiseOff;
}

/// Total budget epsilon split between the start distribution (eps_s) and the
/// Markov process (eps_m): eps_s = delta_split * epsilon, eps_m = rest.
struct PrivacyBudget {
  double epsilon = 1.0;
  double delta_split = 0.5;
  double eps_s = 0.5;
  double eps_m = 0.5;

  friend bool operator==(const PrivacyBudget&, const PrivacyBudget&) = default;
};

/// Throws InvalidBudget unless epsilon > 0 and delta_split in (0, 1).
PrivacyBudget split_budget(double epsilon, double delta_split);

/// Stream ids keyed by purpose. Each pipeline stage draws from its own
/// stream so adding or removing a stage never shifts another stage's noise.
namespace noise_stream {
inline constexpr std::uint64_t start_counts = 0;
inline constexpr std::uint64_t frequency_matrix = 1;
inline constexpr std::uint64_t generation_base = 2;  // + trajectory index
}  // namespace noise_stream

/// Counter-based uniform generator. The state is seeded from (seed, stream),
/// advances by a fixed increment per draw, and each output is the SplitMix64
/// finalizer hash of the state. A (seed, stream) pair therefore yields the
/// same sequence on every platform, and distinct streams are independent.
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();

  /// Uniform draw in the open interval (0, 1), 53-bit resolution.
  double next_uniform();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t state_;
};

/// One Laplace(0, scale) draw via inverse CDF:
/// u ~ Uniform(-1/2, 1/2), x = -scale * sgn(u) * ln(1 - 2|u|).
double laplace_sample(double scale, NoiseSource& rng);

}  // namespace dpstts
