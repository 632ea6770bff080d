#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dpstts/errors.hpp"
#include "dpstts/grid.hpp"
#include "dpstts/ingest.hpp"

namespace dpstts {

/// Uniform 2-D evaluation grid over the spatial domain (independent of the
/// model grid).
struct EvalGrid {
  std::int32_t rows = 20;
  std::int32_t cols = 20;

  void validate() const;  // throws InvalidConfig
  std::int64_t cell_count() const {
    return static_cast<std::int64_t>(rows) * cols;
  }
};

/// Ordered cell-id list plus its occurrence count in a dataset.
struct Pattern {
  std::vector<std::uint32_t> cells;
  std::int64_t count = 0;

  friend bool operator==(const Pattern&, const Pattern&) = default;
};

struct MinedPatterns {
  std::vector<Pattern> patterns;  // by count desc, ties lexicographic
  bool fewer_than_k = false;
};

struct EvalParams {
  EvalGrid grid{20, 20};
  double sanity_fraction = 0.001;  // lambda = fraction * |D|
  int top_k = 200;
  double bin_seconds = 900.0;  // 15-minute temporal bins
  int length_buckets = 20;
  int pattern_min_len = 2;
  int pattern_max_len = 8;
};

struct MetricsReport {
  std::vector<double> temporal_hist_real;
  std::vector<double> temporal_hist_syn;
  double temporal_jsd = 0.0;
  double location_avre = 0.0;
  double location_kt = 0.0;
  double fp_kt = 0.0;
  double trip_error = 0.0;
  double length_error = 0.0;
};

/// Jensen-Shannon divergence, base 2, in [0, 1]; 0 log 0 terms are 0.
/// Inputs must be equal-length distributions (sum 1 +- 1e-6, entries >= 0).
double jsd(std::span<const double> p, std::span<const double> q);

/// Kendall rank correlation, tau-a style: ties in either vector contribute
/// nothing to the numerator and the denominator is always n(n-1)/2.
double kendall_tau(std::span<const double> a, std::span<const double> b);

/// Probability of a visit falling into each bin_seconds slice of the domain's
/// time window; points outside the window are ignored. Throws EmptyDataset
/// when nothing is counted.
std::vector<double> temporal_visit_distribution(const RawDataset& ds,
                                                const SpatioTemporalDomain& dom,
                                                double bin_seconds = 900.0);

/// Per-cell visit counts (every point counts once); out-of-domain points are
/// dropped.
std::vector<std::int64_t> location_popularity(const RawDataset& ds,
                                              const SpatioTemporalDomain& dom,
                                              const EvalGrid& g);

/// Mean over all cells of |pop_d - pop_syn| / max(pop_d, lambda).
double location_avre(const RawDataset& d, const RawDataset& d_syn,
                     const SpatioTemporalDomain& dom, const EvalGrid& g,
                     double lambda);

double location_kt(const RawDataset& d, const RawDataset& d_syn,
                   const SpatioTemporalDomain& dom, const EvalGrid& g);

/// Trajectory mapped to its (collapsed) evaluation-cell sequence; in-domain
/// points only.
std::vector<std::uint32_t> cell_sequence(const RawTrajectory& tr,
                                         const SpatioTemporalDomain& dom,
                                         const EvalGrid& g);

/// Counts every contiguous cell-sequence window with length in
/// [min_len, max_len] and returns the k most frequent patterns, ties broken
/// by lexicographic cell order. fewer_than_k flags short results.
MinedPatterns mine_top_k_patterns(const RawDataset& ds,
                                  const SpatioTemporalDomain& dom,
                                  const EvalGrid& g, int k, int min_len = 2,
                                  int max_len = 8);

/// Occurrence count of each given pattern in ds, aligned with `patterns`.
std::vector<std::int64_t> count_pattern_occurrences(
    const RawDataset& ds, const SpatioTemporalDomain& dom, const EvalGrid& g,
    std::span<const Pattern> patterns);

/// Kendall tau between the top-k pattern counts of d and the same patterns'
/// counts in d_syn (denominator uses the actual pattern count when fewer
/// than k exist).
double fp_kt(const RawDataset& d, const RawDataset& d_syn,
             const SpatioTemporalDomain& dom, const EvalGrid& g, int k,
             int min_len = 2, int max_len = 8);

/// JSD between the (start cell, end cell) trip distributions.
double trip_error(const RawDataset& d, const RawDataset& d_syn,
                  const SpatioTemporalDomain& dom, const EvalGrid& g);

/// JSD between trajectory-length histograms over `buckets` equal-width
/// buckets spanning d's length range; d_syn lengths clamp into the range.
double length_error(const RawDataset& d, const RawDataset& d_syn,
                    int buckets = 20);

MetricsReport evaluate_all(const RawDataset& d, const RawDataset& d_syn,
                           const SpatioTemporalDomain& dom,
                           const EvalParams& params = {});

/// Flat JSON document with the six scores, the histograms and the inputs
/// that shaped them.
std::string report_to_json(const MetricsReport& report, const EvalParams& params,
                           std::size_t real_count, std::size_t syn_count);

/// Two-column plot data: "bin_start_seconds,probability".
void write_histogram_csv(std::ostream& out, std::span<const double> hist,
                         const SpatioTemporalDomain& dom, double bin_seconds);

}  // namespace dpstts
