#include "dpstts/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <unordered_map>
#include <utility>

#include "json.hpp"

namespace dpstts {

namespace {

void check_distribution(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw DimensionMismatch("distributions differ in length: " +
                            std::to_string(p.size()) + " vs " +
                            std::to_string(q.size()));
  }
  for (std::span<const double> d : {p, q}) {
    double sum = 0.0;
    for (double v : d) {
      if (v < 0.0 || !std::isfinite(v)) {
        throw NotADistribution("negative or non-finite probability entry");
      }
      sum += v;
    }
    if (std::fabs(sum - 1.0) > 1e-6) {
      throw NotADistribution("probabilities sum to " + std::to_string(sum));
    }
  }
}

// Strict inversions (b_i > b_j for i < j) by merge sort.
std::int64_t count_inversions(std::vector<double>& values,
                              std::vector<double>& scratch, std::size_t lo,
                              std::size_t hi) {
  if (hi - lo < 2) {
    return 0;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t inv = count_inversions(values, scratch, lo, mid) +
                     count_inversions(values, scratch, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (values[j] < values[i]) {
      inv += static_cast<std::int64_t>(mid - i);
      scratch[k++] = values[j++];
    } else {
      scratch[k++] = values[i++];
    }
  }
  while (i < mid) scratch[k++] = values[i++];
  while (j < hi) scratch[k++] = values[j++];
  std::copy(scratch.begin() + lo, scratch.begin() + hi, values.begin() + lo);
  return inv;
}

std::int64_t tie_pairs(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  std::int64_t pairs = 0;
  std::size_t run = 1;
  for (std::size_t i = 1; i <= values.size(); ++i) {
    if (i < values.size() && values[i] == values[i - 1]) {
      ++run;
    } else {
      pairs += static_cast<std::int64_t>(run) * (run - 1) / 2;
      run = 1;
    }
  }
  return pairs;
}

std::int32_t clamp_floor(double value, double origin, double cell,
                         std::int32_t count) {
  auto idx = static_cast<std::int32_t>(std::floor((value - origin) / cell));
  return std::clamp(idx, 0, count - 1);
}

std::uint32_t point_cell(const RawPoint& p, const SpatioTemporalDomain& dom,
                         const EvalGrid& g) {
  const double cw = (dom.right - dom.left) / g.cols;
  const double ch = (dom.top - dom.bottom) / g.rows;
  const std::int32_t cx = clamp_floor(p.lon, dom.left, cw, g.cols);
  const std::int32_t cy = clamp_floor(p.lat, dom.bottom, ch, g.rows);
  return static_cast<std::uint32_t>(cy) * static_cast<std::uint32_t>(g.cols) +
         static_cast<std::uint32_t>(cx);
}

struct CellVecHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const {
    std::size_t h = 1469598103934665603ull;  // FNV-1a
    for (std::uint32_t c : v) {
      for (int byte = 0; byte < 4; ++byte) {
        h ^= (c >> (byte * 8)) & 0xffu;
        h *= 1099511628211ull;
      }
    }
    return h;
  }
};

using PatternCounts =
    std::unordered_map<std::vector<std::uint32_t>, std::int64_t, CellVecHash>;

void count_windows(const std::vector<std::uint32_t>& seq, int min_len,
                   int max_len, PatternCounts& counts) {
  const auto n = static_cast<int>(seq.size());
  for (int len = min_len; len <= std::min(max_len, n); ++len) {
    for (int start = 0; start + len <= n; ++start) {
      std::vector<std::uint32_t> key(seq.begin() + start,
                                     seq.begin() + start + len);
      ++counts[std::move(key)];
    }
  }
}

std::vector<double> normalize_counts(const std::vector<std::int64_t>& counts,
                                     std::int64_t total) {
  std::vector<double> dist(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    dist[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  }
  return dist;
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

void EvalGrid::validate() const {
  if (rows < 1 || cols < 1) {
    throw InvalidConfig("evaluation grid requires rows, cols >= 1");
  }
}

double jsd(std::span<const double> p, std::span<const double> q) {
  check_distribution(p, q);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double m = (p[i] + q[i]) / 2.0;
    const double tp = p[i] > 0.0 ? 0.5 * p[i] * std::log2(p[i] / m) : 0.0;
    const double tq = q[i] > 0.0 ? 0.5 * q[i] * std::log2(q[i] / m) : 0.0;
    sum += tp + tq;  // one addition per index keeps jsd exactly symmetric
  }
  return std::max(sum, 0.0);
}

double kendall_tau(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw DimensionMismatch("rank vectors differ in length");
  }
  const auto n = static_cast<std::int64_t>(a.size());
  if (n < 2) {
    throw TooFewItems("kendall tau needs at least two items");
  }

  std::vector<std::size_t> order(a.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    if (a[i] != a[j]) return a[i] < a[j];
    return b[i] < b[j];
  });

  // Pairs tied in a, in b, and in both.
  std::int64_t ties_a = 0, ties_ab = 0;
  std::size_t run_a = 1, run_ab = 1;
  for (std::size_t i = 1; i <= order.size(); ++i) {
    const bool same_a = i < order.size() && a[order[i]] == a[order[i - 1]];
    const bool same_ab = same_a && b[order[i]] == b[order[i - 1]];
    if (same_a) {
      ++run_a;
    } else {
      ties_a += static_cast<std::int64_t>(run_a) * (run_a - 1) / 2;
      run_a = 1;
    }
    if (same_ab) {
      ++run_ab;
    } else {
      ties_ab += static_cast<std::int64_t>(run_ab) * (run_ab - 1) / 2;
      run_ab = 1;
    }
  }
  const std::int64_t ties_b = tie_pairs(std::vector<double>(b.begin(), b.end()));

  // With equal a sorted by ascending b, strict b-inversions are exactly the
  // strictly discordant pairs.
  std::vector<double> seq(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) seq[i] = b[order[i]];
  std::vector<double> scratch(seq.size());
  const std::int64_t discordant =
      count_inversions(seq, scratch, 0, seq.size());

  const std::int64_t total = n * (n - 1) / 2;
  const std::int64_t strict_both = total - ties_a - ties_b + ties_ab;
  const std::int64_t numerator = strict_both - 2 * discordant;
  return static_cast<double>(numerator) / static_cast<double>(total);
}

std::vector<double> temporal_visit_distribution(const RawDataset& ds,
                                                const SpatioTemporalDomain& dom,
                                                double bin_seconds) {
  dom.validate();
  if (!(bin_seconds > 0.0)) {
    throw InvalidConfig("bin width must be positive");
  }
  const double span = dom.e_time - dom.s_time;
  const int bins = std::max(1, static_cast<int>(std::ceil(span / bin_seconds - 1e-9)));
  std::vector<std::int64_t> counts(bins, 0);
  std::int64_t total = 0;
  for (const RawTrajectory& tr : ds.trajectories) {
    for (const RawPoint& p : tr.points) {
      if (p.time < dom.s_time || p.time > dom.e_time) {
        continue;
      }
      ++counts[clamp_floor(p.time, dom.s_time, bin_seconds, bins)];
      ++total;
    }
  }
  if (total == 0) {
    throw EmptyDataset("no visit falls inside the time window");
  }
  return normalize_counts(counts, total);
}

std::vector<std::int64_t> location_popularity(const RawDataset& ds,
                                              const SpatioTemporalDomain& dom,
                                              const EvalGrid& g) {
  g.validate();
  std::vector<std::int64_t> counts(g.cell_count(), 0);
  for (const RawTrajectory& tr : ds.trajectories) {
    for (const RawPoint& p : tr.points) {
      if (!dom.contains(p)) {
        continue;
      }
      ++counts[point_cell(p, dom, g)];
    }
  }
  return counts;
}

double location_avre(const RawDataset& d, const RawDataset& d_syn,
                     const SpatioTemporalDomain& dom, const EvalGrid& g,
                     double lambda) {
  if (!(lambda > 0.0)) {
    throw InvalidConfig("sanity bound lambda must be positive");
  }
  const std::vector<std::int64_t> pop_d = location_popularity(d, dom, g);
  const std::vector<std::int64_t> pop_s = location_popularity(d_syn, dom, g);
  double sum = 0.0;
  for (std::size_t i = 0; i < pop_d.size(); ++i) {
    const double real = static_cast<double>(pop_d[i]);
    const double syn = static_cast<double>(pop_s[i]);
    sum += std::fabs(real - syn) / std::max(real, lambda);
  }
  return sum / static_cast<double>(pop_d.size());
}

double location_kt(const RawDataset& d, const RawDataset& d_syn,
                   const SpatioTemporalDomain& dom, const EvalGrid& g) {
  const std::vector<std::int64_t> pop_d = location_popularity(d, dom, g);
  const std::vector<std::int64_t> pop_s = location_popularity(d_syn, dom, g);
  std::vector<double> a(pop_d.begin(), pop_d.end());
  std::vector<double> b(pop_s.begin(), pop_s.end());
  return kendall_tau(a, b);
}

std::vector<std::uint32_t> cell_sequence(const RawTrajectory& tr,
                                         const SpatioTemporalDomain& dom,
                                         const EvalGrid& g) {
  std::vector<std::uint32_t> seq;
  for (const RawPoint& p : tr.points) {
    if (!dom.contains(p)) {
      continue;
    }
    const std::uint32_t cell = point_cell(p, dom, g);
    if (seq.empty() || seq.back() != cell) {
      seq.push_back(cell);
    }
  }
  return seq;
}

MinedPatterns mine_top_k_patterns(const RawDataset& ds,
                                  const SpatioTemporalDomain& dom,
                                  const EvalGrid& g, int k, int min_len,
                                  int max_len) {
  g.validate();
  if (k < 2) {
    throw InvalidConfig("top-k pattern mining requires k >= 2");
  }
  if (min_len < 2 || max_len < min_len) {
    throw InvalidConfig("pattern lengths must satisfy 2 <= min_len <= max_len");
  }
  PatternCounts counts;
  for (const RawTrajectory& tr : ds.trajectories) {
    count_windows(cell_sequence(tr, dom, g), min_len, max_len, counts);
  }
  std::vector<Pattern> all;
  all.reserve(counts.size());
  for (auto& [cells, count] : counts) {
    all.push_back(Pattern{cells, count});
  }
  std::sort(all.begin(), all.end(), [](const Pattern& x, const Pattern& y) {
    if (x.count != y.count) return x.count > y.count;
    return x.cells < y.cells;
  });

  MinedPatterns result;
  result.fewer_than_k = static_cast<int>(all.size()) < k;
  if (static_cast<int>(all.size()) > k) {
    all.resize(k);
  }
  result.patterns = std::move(all);
  return result;
}

std::vector<std::int64_t> count_pattern_occurrences(
    const RawDataset& ds, const SpatioTemporalDomain& dom, const EvalGrid& g,
    std::span<const Pattern> patterns) {
  std::unordered_map<std::vector<std::uint32_t>, std::size_t, CellVecHash> slot;
  int min_len = 0, max_len = 0;
  for (std::size_t i = 0; i < patterns.size(); ++i) {
    const int len = static_cast<int>(patterns[i].cells.size());
    min_len = min_len == 0 ? len : std::min(min_len, len);
    max_len = std::max(max_len, len);
    slot[patterns[i].cells] = i;
  }
  std::vector<std::int64_t> counts(patterns.size(), 0);
  if (patterns.empty()) {
    return counts;
  }
  for (const RawTrajectory& tr : ds.trajectories) {
    const std::vector<std::uint32_t> seq = cell_sequence(tr, dom, g);
    const auto n = static_cast<int>(seq.size());
    for (int len = min_len; len <= std::min(max_len, n); ++len) {
      for (int start = 0; start + len <= n; ++start) {
        std::vector<std::uint32_t> key(seq.begin() + start,
                                       seq.begin() + start + len);
        const auto it = slot.find(key);
        if (it != slot.end()) {
          ++counts[it->second];
        }
      }
    }
  }
  return counts;
}

double fp_kt(const RawDataset& d, const RawDataset& d_syn,
             const SpatioTemporalDomain& dom, const EvalGrid& g, int k,
             int min_len, int max_len) {
  const MinedPatterns mined = mine_top_k_patterns(d, dom, g, k, min_len, max_len);
  if (mined.patterns.size() < 2) {
    throw TooFewItems("dataset yields fewer than two patterns");
  }
  std::vector<double> counts_d;
  counts_d.reserve(mined.patterns.size());
  for (const Pattern& p : mined.patterns) {
    counts_d.push_back(static_cast<double>(p.count));
  }
  const std::vector<std::int64_t> syn =
      count_pattern_occurrences(d_syn, dom, g, mined.patterns);
  std::vector<double> counts_s(syn.begin(), syn.end());
  return kendall_tau(counts_d, counts_s);
}

double trip_error(const RawDataset& d, const RawDataset& d_syn,
                  const SpatioTemporalDomain& dom, const EvalGrid& g) {
  g.validate();
  const auto gamma = static_cast<std::size_t>(g.cell_count());
  auto trip_distribution = [&](const RawDataset& ds) {
    std::vector<std::int64_t> counts(gamma * gamma, 0);
    std::int64_t total = 0;
    for (const RawTrajectory& tr : ds.trajectories) {
      const RawPoint* first = nullptr;
      const RawPoint* last = nullptr;
      for (const RawPoint& p : tr.points) {
        if (!dom.contains(p)) {
          continue;
        }
        if (first == nullptr) {
          first = &p;
        }
        last = &p;
      }
      if (first == nullptr) {
        continue;
      }
      ++counts[static_cast<std::size_t>(point_cell(*first, dom, g)) * gamma +
               point_cell(*last, dom, g)];
      ++total;
    }
    if (total == 0) {
      throw EmptyDataset("no trajectory with in-domain points");
    }
    return normalize_counts(counts, total);
  };
  return jsd(trip_distribution(d), trip_distribution(d_syn));
}

double length_error(const RawDataset& d, const RawDataset& d_syn, int buckets) {
  if (buckets < 1) {
    throw InvalidConfig("length buckets must be >= 1");
  }
  if (d.trajectories.empty() || d_syn.trajectories.empty()) {
    throw EmptyDataset("length error needs non-empty datasets");
  }
  std::int64_t lo = static_cast<std::int64_t>(d.trajectories.front().points.size());
  std::int64_t hi = lo;
  for (const RawTrajectory& tr : d.trajectories) {
    const auto len = static_cast<std::int64_t>(tr.points.size());
    lo = std::min(lo, len);
    hi = std::max(hi, len);
  }
  if (lo == hi) {
    // Degenerate range: a single bucket swallows everything on both sides.
    return 0.0;
  }
  const double width = static_cast<double>(hi - lo) / buckets;
  auto histogram = [&](const RawDataset& ds) {
    std::vector<std::int64_t> counts(buckets, 0);
    for (const RawTrajectory& tr : ds.trajectories) {
      const double len = static_cast<double>(tr.points.size());
      ++counts[clamp_floor(len, static_cast<double>(lo), width, buckets)];
    }
    return normalize_counts(counts,
                            static_cast<std::int64_t>(ds.trajectories.size()));
  };
  return jsd(histogram(d), histogram(d_syn));
}

MetricsReport evaluate_all(const RawDataset& d, const RawDataset& d_syn,
                           const SpatioTemporalDomain& dom,
                           const EvalParams& params) {
  const double lambda =
      params.sanity_fraction * static_cast<double>(d.trajectories.size());
  MetricsReport report;
  report.temporal_hist_real =
      temporal_visit_distribution(d, dom, params.bin_seconds);
  report.temporal_hist_syn =
      temporal_visit_distribution(d_syn, dom, params.bin_seconds);
  report.temporal_jsd = jsd(report.temporal_hist_real, report.temporal_hist_syn);
  report.location_avre = location_avre(d, d_syn, dom, params.grid, lambda);
  report.location_kt = location_kt(d, d_syn, dom, params.grid);
  report.fp_kt = fp_kt(d, d_syn, dom, params.grid, params.top_k,
                       params.pattern_min_len, params.pattern_max_len);
  report.trip_error = trip_error(d, d_syn, dom, params.grid);
  report.length_error = length_error(d, d_syn, params.length_buckets);
  return report;
}

std::string report_to_json(const MetricsReport& report, const EvalParams& params,
                           std::size_t real_count, std::size_t syn_count) {
  nlohmann::json doc;
  doc["format"] = "dpstts-report";
  doc["version"] = 1;
  doc["real_trajectories"] = real_count;
  doc["synthetic_trajectories"] = syn_count;
  doc["eval_grid"] = std::to_string(params.grid.cols) + "x" +
                     std::to_string(params.grid.rows);
  doc["sanity_fraction"] = params.sanity_fraction;
  doc["top_k"] = params.top_k;
  doc["bin_seconds"] = params.bin_seconds;
  doc["length_buckets"] = params.length_buckets;
  doc["temporal_jsd"] = report.temporal_jsd;
  doc["location_avre"] = report.location_avre;
  doc["location_kt"] = report.location_kt;
  doc["fp_kt"] = report.fp_kt;
  doc["trip_error"] = report.trip_error;
  doc["length_error"] = report.length_error;
  doc["temporal_hist_real"] = report.temporal_hist_real;
  doc["temporal_hist_syn"] = report.temporal_hist_syn;
  return doc.dump();
}

void write_histogram_csv(std::ostream& out, std::span<const double> hist,
                         const SpatioTemporalDomain& dom, double bin_seconds) {
  out << "bin_start_seconds,probability\n";
  for (std::size_t i = 0; i < hist.size(); ++i) {
    out << format_double(dom.s_time + static_cast<double>(i) * bin_seconds)
        << ',' << format_double(hist[i]) << '\n';
  }
}

}  // namespace dpstts
