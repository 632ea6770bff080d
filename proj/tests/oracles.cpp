#include "oracles.hpp"

#include <algorithm>
#include <cmath>

namespace dpstts::oracle {

bool is_neighbor_brute(const Cube& from, const Cube& to, std::int32_t v) {
  // First condition set: |dx| <= 1, |dy| <= 1, 0 <= dt <= 1, cubes distinct.
  const bool set_one = std::abs(to.x - from.x) <= 1 &&
                       std::abs(to.y - from.y) <= 1 && to.t - from.t >= 0 &&
                       to.t - from.t <= 1 && !(from == to);
  // Second condition set: same spatial cell, time advance in [1, v].
  const bool set_two = to.x == from.x && to.y == from.y &&
                       to.t - from.t >= 1 && to.t - from.t <= v;
  return set_one || set_two;
}

std::vector<Cube> neighbors_brute(const Cube& c, const GridSpec& g) {
  std::vector<Cube> out;
  for (std::int32_t t = 0; t < g.g_t; ++t) {
    for (std::int32_t y = 0; y < g.g_h; ++y) {
      for (std::int32_t x = 0; x < g.g_w; ++x) {
        const Cube cand{x, y, t};
        if (is_neighbor_brute(c, cand, g.v)) {
          out.push_back(cand);
        }
      }
    }
  }
  return out;
}

double kendall_tau_brute(const std::vector<double>& a,
                         const std::vector<double>& b) {
  const auto n = static_cast<std::int64_t>(a.size());
  std::int64_t concordant = 0;
  std::int64_t discordant = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if ((a[i] > a[j] && b[i] > b[j]) || (a[i] < a[j] && b[i] < b[j])) {
        ++concordant;
      } else if ((a[i] > a[j] && b[i] < b[j]) || (a[i] < a[j] && b[i] > b[j])) {
        ++discordant;
      }
    }
  }
  return static_cast<double>(concordant - discordant) /
         static_cast<double>(n * (n - 1) / 2);
}

namespace {

std::vector<std::pair<std::uint32_t, std::uint32_t>> two_grams(
    const CubeTrajectory& tr, const GridSpec& g) {
  const auto stop = static_cast<std::uint32_t>(g.cube_count());
  std::vector<std::pair<std::uint32_t, std::uint32_t>> grams;
  for (std::size_t j = 0; j + 1 < tr.cubes.size(); ++j) {
    grams.emplace_back(cube_id(tr.cubes[j], g), cube_id(tr.cubes[j + 1], g));
  }
  grams.emplace_back(cube_id(tr.cubes.back(), g), stop);
  return grams;
}

}  // namespace

SparseMatrix markov_estimator_raw(const std::vector<CubeTrajectory>& da,
                                  const GridSpec& g) {
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::int64_t> gram_counts;
  std::map<std::uint32_t, std::int64_t> row_counts;
  for (const CubeTrajectory& tr : da) {
    for (const auto& gram : two_grams(tr, g)) {
      ++gram_counts[gram];
      ++row_counts[gram.first];
    }
  }
  SparseMatrix est;
  for (const auto& [gram, count] : gram_counts) {
    est[gram] = static_cast<double>(count) /
                static_cast<double>(row_counts.at(gram.first));
  }
  return est;
}

SparseMatrix markov_estimator_weighted(const std::vector<CubeTrajectory>& da,
                                       const GridSpec& g) {
  SparseMatrix weights;
  std::map<std::uint32_t, double> row_sums;
  for (const CubeTrajectory& tr : da) {
    const double w = 1.0 / static_cast<double>(tr.cubes.size());
    for (const auto& gram : two_grams(tr, g)) {
      weights[gram] += w;
      row_sums[gram.first] += w;
    }
  }
  SparseMatrix est;
  for (const auto& [gram, weight] : weights) {
    est[gram] = weight / row_sums.at(gram.first);
  }
  return est;
}

std::vector<double> start_frequencies(const std::vector<CubeTrajectory>& da,
                                      const GridSpec& g) {
  std::vector<double> freq(g.cube_count(), 0.0);
  for (const CubeTrajectory& tr : da) {
    freq[cube_id(tr.cubes.front(), g)] += 1.0;
  }
  for (double& f : freq) {
    f /= static_cast<double>(da.size());
  }
  return freq;
}

std::map<std::vector<std::uint32_t>, std::int64_t> pattern_counts_brute(
    const std::vector<std::vector<std::uint32_t>>& sequences, int min_len,
    int max_len) {
  std::map<std::vector<std::uint32_t>, std::int64_t> counts;
  for (const auto& seq : sequences) {
    const auto n = static_cast<int>(seq.size());
    for (int start = 0; start < n; ++start) {
      for (int len = min_len; len <= max_len && start + len <= n; ++len) {
        ++counts[std::vector<std::uint32_t>(seq.begin() + start,
                                            seq.begin() + start + len)];
      }
    }
  }
  return counts;
}

std::uint32_t point_cell_brute(const RawPoint& p,
                               const SpatioTemporalDomain& dom,
                               std::int32_t rows, std::int32_t cols) {
  auto cx = static_cast<std::int32_t>(
      std::floor((p.lon - dom.left) / ((dom.right - dom.left) / cols)));
  auto cy = static_cast<std::int32_t>(
      std::floor((p.lat - dom.bottom) / ((dom.top - dom.bottom) / rows)));
  cx = std::min(std::max(cx, 0), cols - 1);
  cy = std::min(std::max(cy, 0), rows - 1);
  return static_cast<std::uint32_t>(cy * cols + cx);
}

CubeTrajectory random_cube_trajectory(std::mt19937_64& rng, const GridSpec& g,
                                      int max_len) {
  std::uniform_int_distribution<std::int32_t> ux(0, g.g_w - 1);
  std::uniform_int_distribution<std::int32_t> uy(0, g.g_h - 1);
  std::uniform_int_distribution<std::int32_t> ut(0, g.g_t - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  CubeTrajectory tr;
  tr.terminated = true;
  tr.cubes.push_back(Cube{ux(rng), uy(rng), ut(rng)});
  while (static_cast<int>(tr.cubes.size()) < max_len && coin(rng) > 0.2) {
    const Cube& cur = tr.cubes.back();
    std::vector<Cube> steps;
    for (std::int32_t t = cur.t; t <= std::min(cur.t + g.v, g.g_t - 1); ++t) {
      for (std::int32_t y = std::max(cur.y - 1, 0);
           y <= std::min(cur.y + 1, g.g_h - 1); ++y) {
        for (std::int32_t x = std::max(cur.x - 1, 0);
             x <= std::min(cur.x + 1, g.g_w - 1); ++x) {
          const Cube cand{x, y, t};
          if (is_neighbor_brute(cur, cand, g.v)) {
            steps.push_back(cand);
          }
        }
      }
    }
    if (steps.empty()) {
      break;
    }
    std::uniform_int_distribution<std::size_t> pick(0, steps.size() - 1);
    tr.cubes.push_back(steps[pick(rng)]);
  }
  return tr;
}

std::vector<CubeTrajectory> random_cube_dataset(std::mt19937_64& rng,
                                                const GridSpec& g, int count,
                                                int max_len) {
  std::vector<CubeTrajectory> da;
  da.reserve(count);
  for (int i = 0; i < count; ++i) {
    da.push_back(random_cube_trajectory(rng, g, max_len));
  }
  return da;
}

std::vector<CubeTrajectory> random_cube_dataset_fixed_len(std::mt19937_64& rng,
                                                          const GridSpec& g,
                                                          int count, int len) {
  std::vector<CubeTrajectory> da;
  da.reserve(count);
  while (static_cast<int>(da.size()) < count) {
    CubeTrajectory tr = random_cube_trajectory(rng, g, len);
    while (static_cast<int>(tr.cubes.size()) < len) {
      // extend with more brute-neighbor steps; give up if stuck in a corner
      CubeTrajectory longer = random_cube_trajectory(rng, g, len);
      tr = std::move(longer);
    }
    if (static_cast<int>(tr.cubes.size()) == len) {
      da.push_back(std::move(tr));
    }
  }
  return da;
}

RawDataset random_raw_dataset(std::mt19937_64& rng,
                              const SpatioTemporalDomain& dom, int count,
                              int min_pts, int max_pts) {
  std::uniform_real_distribution<double> ulon(dom.left, dom.right);
  std::uniform_real_distribution<double> ulat(dom.bottom, dom.top);
  std::uniform_real_distribution<double> step(-0.03, 0.03);
  std::uniform_real_distribution<double> dt(5.0, 60.0);
  std::uniform_int_distribution<int> upts(min_pts, max_pts);

  const double lon_span = dom.right - dom.left;
  const double lat_span = dom.top - dom.bottom;
  RawDataset ds;
  ds.source = "random-walk";
  for (int i = 0; i < count; ++i) {
    RawTrajectory tr;
    tr.id = "rw-" + std::to_string(i);
    const int pts = upts(rng);
    double lon = ulon(rng);
    double lat = ulat(rng);
    std::uniform_real_distribution<double> ut(
        dom.s_time, dom.s_time + 0.7 * (dom.e_time - dom.s_time));
    double t = ut(rng);
    for (int k = 0; k < pts && t <= dom.e_time; ++k) {
      tr.points.push_back(RawPoint{lon, lat, t});
      lon = std::clamp(lon + step(rng) * lon_span, dom.left, dom.right);
      lat = std::clamp(lat + step(rng) * lat_span, dom.bottom, dom.top);
      t += dt(rng);
    }
    ds.trajectories.push_back(std::move(tr));
  }
  return ds;
}

RawDataset tie_free_dataset(const SpatioTemporalDomain& dom, std::int32_t rows,
                            std::int32_t cols) {
  const double cw = (dom.right - dom.left) / cols;
  const double ch = (dom.top - dom.bottom) / rows;
  const double t0 = dom.s_time;
  auto center = [&](std::int32_t cx, std::int32_t cy, double t) {
    return RawPoint{dom.left + (cx + 0.5) * cw, dom.bottom + (cy + 0.5) * ch, t};
  };

  RawDataset ds;
  ds.source = "tie-free-fixture";
  std::vector<std::int64_t> pop(static_cast<std::size_t>(rows) * cols, 0);

  // Walks along row j with multiplicity j+1: the only patterns are the
  // rows' 2-cell sequences, with pairwise distinct counts 1..rows.
  int id = 0;
  for (std::int32_t j = 0; j < rows; ++j) {
    for (std::int32_t copy = 0; copy <= j; ++copy) {
      RawTrajectory tr;
      tr.id = "walk-" + std::to_string(id++);
      tr.points = {center(0, j, t0 + 1.0 + copy), center(1, j, t0 + 2.0 + copy)};
      pop[static_cast<std::size_t>(j) * cols] += 1;
      pop[static_cast<std::size_t>(j) * cols + 1] += 1;
      ds.trajectories.push_back(std::move(tr));
    }
  }

  // Single-point fillers push every cell's popularity to the distinct
  // target rows + 2 + cell_id.
  for (std::int32_t cy = 0; cy < rows; ++cy) {
    for (std::int32_t cx = 0; cx < cols; ++cx) {
      const std::size_t cell = static_cast<std::size_t>(cy) * cols + cx;
      const std::int64_t target = rows + 2 + static_cast<std::int64_t>(cell);
      for (std::int64_t k = pop[cell]; k < target; ++k) {
        RawTrajectory tr;
        tr.id = "fill-" + std::to_string(id++);
        tr.points = {center(cx, cy, t0 + 3.0 + static_cast<double>(k) * 1e-3)};
        ds.trajectories.push_back(std::move(tr));
      }
    }
  }
  return ds;
}

}  // namespace dpstts::oracle
