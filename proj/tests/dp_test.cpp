#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dpstts/dp.hpp"

using namespace dpstts;

TEST_CASE("split_budget follows eps_s = delta * eps, eps_m = rest") {
  const PrivacyBudget b = split_budget(1.0, 0.5);  // the reference setting
  CHECK(b.eps_s == 0.5);
  CHECK(b.eps_m == 0.5);
  const PrivacyBudget c = split_budget(0.5, 0.5);
  CHECK(c.eps_s == 0.25);
  CHECK(c.eps_m == 0.25);
  const PrivacyBudget d = split_budget(2.0, 0.25);
  CHECK(d.eps_s == 0.5);
  CHECK(d.eps_m == 1.5);
  CHECK(d.eps_s + d.eps_m == d.epsilon);
}

TEST_CASE("split_budget rejects out-of-range arguments") {
  CHECK_THROWS_AS(split_budget(0.0, 0.5), InvalidBudget);
  CHECK_THROWS_AS(split_budget(-1.0, 0.5), InvalidBudget);
  CHECK_THROWS_AS(split_budget(1.0, 0.0), InvalidBudget);
  CHECK_THROWS_AS(split_budget(1.0, 1.0), InvalidBudget);
  CHECK_NOTHROW(split_budget(kNoiseOff, 0.5));  // noise-off sentinel
}

TEST_CASE("split components stay positive and sum back to epsilon") {
  for (double eps : {0.1, 0.5, 1.0, 10.0}) {
    for (double delta : {0.01, 0.25, 0.5, 0.99}) {
      const PrivacyBudget b = split_budget(eps, delta);
      CHECK(b.eps_s > 0.0);
      CHECK(b.eps_m > 0.0);
      CHECK(b.eps_s + b.eps_m == doctest::Approx(eps).epsilon(1e-12));
    }
  }
}

TEST_CASE("equal seeds and streams reproduce the identical draw sequence") {
  NoiseSource a(123, 4);
  NoiseSource b(123, 4);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  NoiseSource c(123, 5);
  NoiseSource d(124, 4);
  NoiseSource e(123, 4);
  bool stream_differs = false;
  bool seed_differs = false;
  for (int i = 0; i < 64; ++i) {
    const std::uint64_t ref = e.next_u64();
    stream_differs |= c.next_u64() != ref;
    seed_differs |= d.next_u64() != ref;
  }
  CHECK(stream_differs);
  CHECK(seed_differs);
}

TEST_CASE("uniform draws stay strictly inside (0, 1)") {
  NoiseSource rng(99, 0);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.next_uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("laplace golden stream for seed 42 stays frozen") {
  // Recorded once from this implementation; any change to the generator or
  // the inverse-CDF transform must be deliberate.
  NoiseSource rng(42, 0);
  CHECK(laplace_sample(1.0, rng) == doctest::Approx(0.27206271066336307).epsilon(1e-15));
  CHECK(laplace_sample(1.0, rng) == doctest::Approx(-1.0474794510703964).epsilon(1e-15));
  CHECK(laplace_sample(1.0, rng) == doctest::Approx(-2.054358330145905).epsilon(1e-15));
}

TEST_CASE("laplace sample moments match the distribution") {
  NoiseSource rng(42, 0);
  const int n = 1000000;
  const double scale = 2.0;
  std::vector<double> xs(n);
  double mean = 0.0;
  for (int i = 0; i < n; ++i) {
    xs[i] = laplace_sample(scale, rng);
    mean += xs[i];
  }
  mean /= n;
  double var = 0.0;
  for (double x : xs) {
    var += (x - mean) * (x - mean);
  }
  var /= (n - 1);
  CHECK(std::fabs(mean) < 0.02);
  CHECK(var == doctest::Approx(2.0 * scale * scale).epsilon(0.05));

  // Central uniforms map to samples near zero: the empirical median sits at
  // the distribution's median, 0.
  std::nth_element(xs.begin(), xs.begin() + n / 2, xs.end());
  CHECK(std::fabs(xs[n / 2]) < 0.01);
}

TEST_CASE("laplace draws scale linearly") {
  // Same (seed, stream) means the same uniforms, so samples at scale s are
  // exactly s times the samples at scale 1.
  NoiseSource unit(7, 3);
  NoiseSource scaled(7, 3);
  for (int i = 0; i < 1000; ++i) {
    const double x1 = laplace_sample(1.0, unit);
    const double x5 = laplace_sample(5.0, scaled);
    CHECK(x5 == doctest::Approx(5.0 * x1).epsilon(1e-12));
  }

  // Across independent streams the quartiles still line up.
  NoiseSource a(1, 0);
  NoiseSource b(2, 0);
  const int n = 100000;
  std::vector<double> sa(n), sb(n);
  for (int i = 0; i < n; ++i) {
    sa[i] = laplace_sample(1.0, a);
    sb[i] = laplace_sample(3.0, b);
  }
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  for (double q : {0.1, 0.25, 0.75, 0.9}) {  // quantiles away from the median
    const auto idx = static_cast<std::size_t>(q * n);
    CHECK(sb[idx] == doctest::Approx(3.0 * sa[idx]).epsilon(0.1));
  }
}
