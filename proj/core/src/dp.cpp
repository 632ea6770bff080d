#include "dpstts/dp.hpp"

#include <cassert>
#include <cmath>
#include <string>

namespace dpstts {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kStreamSalt = 0x632BE59BD9B4E019ull;

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

PrivacyBudget split_budget(double epsilon, double delta_split) {
  if (!(epsilon > 0.0) || std::isnan(epsilon)) {
    throw InvalidBudget("epsilon must be > 0, got " + std::to_string(epsilon));
  }
  if (!(delta_split > 0.0) || !(delta_split < 1.0)) {
    throw InvalidBudget("delta_split must lie in (0, 1), got " +
                        std::to_string(delta_split));
  }
  PrivacyBudget b;
  b.epsilon = epsilon;
  b.delta_split = delta_split;
  b.eps_s = delta_split * epsilon;
  b.eps_m = (1.0 - delta_split) * epsilon;
  return b;
}

NoiseSource::NoiseSource(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed),
      stream_(stream),
      state_(mix64(seed ^ (kStreamSalt * (stream + 1)))) {}

std::uint64_t NoiseSource::next_u64() {
  state_ += kGolden;
  return mix64(state_);
}

double NoiseSource::next_uniform() {
  // 53 high bits, shifted into (0, 1): never exactly 0 or 1.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double laplace_sample(double scale, NoiseSource& rng) {
  assert(scale > 0.0);
  const double u = rng.next_uniform() - 0.5;  // in (-1/2, 1/2)
  const double sign = (u > 0.0) - (u < 0.0);
  return -scale * sign * std::log1p(-2.0 * std::fabs(u));
}

}  // namespace dpstts
