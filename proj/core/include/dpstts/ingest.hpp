#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <vector>

#include "dpstts/errors.hpp"
#include "dpstts/grid.hpp"

namespace dpstts {

struct RawTrajectory {
  std::string id;
  std::vector<RawPoint> points;

  friend bool operator==(const RawTrajectory&, const RawTrajectory&) = default;
};

struct RawDataset {
  std::vector<RawTrajectory> trajectories;
  std::string source;

  friend bool operator==(const RawDataset&, const RawDataset&) = default;
};

struct RejectedRecord {
  std::size_t line = 0;
  std::string reason;
};

struct ParseOptions {
  /// Fraction of malformed records tolerated before parsing aborts.
  double reject_ratio = 0.01;
};

struct ParseResult {
  RawDataset dataset;
  std::vector<RejectedRecord> rejects;
  std::size_t skipped = 0;  // rows skipped by design (not malformed)
};

/// One JSON object per line: {"id": "...", "points": [[lon, lat, time], ...]}.
/// Malformed lines are collected with their line numbers; parsing aborts with
/// MalformedRecord once the reject ratio is exceeded, and throws EmptyDataset
/// when no record survives. Timestamps may repeat (synthetic data dwells in a
/// time slice) but must never decrease.
ParseResult parse_jsonl_dataset(std::istream& in, const ParseOptions& opts = {},
                                std::string source = "jsonl");

/// Porto taxi CSV (Kaggle schema): needs TRIP_ID, TIMESTAMP (trip start,
/// epoch seconds) and POLYLINE ("[[lon,lat],...]"); point k of a trip gets
/// time TIMESTAMP + k * sampling_interval. Trips with MISSING_DATA true or an
/// empty polyline are skipped.
ParseResult parse_porto_csv(std::istream& in, double sampling_interval = 15.0,
                            const ParseOptions& opts = {},
                            std::string source = "porto-csv");

enum class TimeMode {
  absolute,     // compare point times directly against [s_time, e_time]
  time_of_day,  // map epoch seconds to seconds-of-day first
};

/// Keeps the in-domain points of every trajectory (original order) and drops
/// trajectories left with no point. In time_of_day mode the retained points
/// carry seconds-of-day timestamps; a trajectory whose rewritten times would
/// decrease (it spans distinct days inside the window) is dropped whole.
RawDataset filter_dataset(const RawDataset& ds, const SpatioTemporalDomain& dom,
                          TimeMode mode = TimeMode::absolute);

double seconds_of_day(double epoch_seconds);

}  // namespace dpstts
