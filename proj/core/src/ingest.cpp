#include "dpstts/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "json.hpp"

namespace dpstts {

namespace {

using nlohmann::json;

bool finite(double v) { return std::isfinite(v); }

void check_reject_ratio(const ParseResult& result, const ParseOptions& opts,
                        std::size_t records) {
  if (records == 0 || result.rejects.empty()) {
    return;
  }
  const double ratio =
      static_cast<double>(result.rejects.size()) / static_cast<double>(records);
  if (ratio > opts.reject_ratio) {
    std::string msg = std::to_string(result.rejects.size()) + " of " +
                      std::to_string(records) +
                      " records malformed (limit " +
                      std::to_string(opts.reject_ratio) + "); first: line " +
                      std::to_string(result.rejects.front().line) + ": " +
                      result.rejects.front().reason;
    throw MalformedRecord(msg);
  }
}

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

// Reads one RFC4180-style CSV record (quoted fields may contain commas,
// escaped quotes and newlines). Returns false at end of stream.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields,
                     std::size_t& line_no) {
  fields.clear();
  std::string field;
  bool in_quotes = false;
  bool any = false;
  int ch;
  while ((ch = in.get()) != std::istream::traits_type::eof()) {
    any = true;
    const char c = static_cast<char>(ch);
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          field.push_back('"');
          in.get();
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') {
          ++line_no;
        }
        field.push_back(c);
      }
    } else if (c == '"') {
      in_quotes = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      ++line_no;
      if (!field.empty() && field.back() == '\r') {
        field.pop_back();
      }
      fields.push_back(std::move(field));
      return true;
    } else {
      field.push_back(c);
    }
  }
  if (!any) {
    return false;
  }
  if (!field.empty() && field.back() == '\r') {
    field.pop_back();
  }
  fields.push_back(std::move(field));
  ++line_no;
  return true;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

ParseResult parse_jsonl_dataset(std::istream& in, const ParseOptions& opts,
                                std::string source) {
  ParseResult result;
  result.dataset.source = std::move(source);
  std::unordered_set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  std::size_t records = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) {
      continue;
    }
    ++records;
    json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded()) {
      result.rejects.push_back({line_no, "invalid JSON"});
      continue;
    }
    if (!doc.is_object() || !doc.contains("id") || !doc["id"].is_string()) {
      result.rejects.push_back({line_no, "missing or non-string id"});
      continue;
    }
    if (!doc.contains("points") || !doc["points"].is_array() ||
        doc["points"].empty()) {
      result.rejects.push_back({line_no, "missing or empty points array"});
      continue;
    }
    RawTrajectory tr;
    tr.id = doc["id"].get<std::string>();
    if (!seen_ids.insert(tr.id).second) {
      result.rejects.push_back({line_no, "duplicate id '" + tr.id + "'"});
      continue;
    }
    bool ok = true;
    tr.points.reserve(doc["points"].size());
    for (const auto& p : doc["points"]) {
      if (!p.is_array() || p.size() != 3 || !p[0].is_number() ||
          !p[1].is_number() || !p[2].is_number()) {
        ok = false;
        result.rejects.push_back({line_no, "point is not [lon, lat, time]"});
        break;
      }
      const RawPoint pt{p[0].get<double>(), p[1].get<double>(),
                        p[2].get<double>()};
      if (!finite(pt.lon) || !finite(pt.lat) || !finite(pt.time)) {
        ok = false;
        result.rejects.push_back({line_no, "non-finite coordinate"});
        break;
      }
      if (!tr.points.empty() && pt.time < tr.points.back().time) {
        ok = false;
        result.rejects.push_back({line_no, "decreasing timestamps"});
        break;
      }
      tr.points.push_back(pt);
    }
    if (!ok) {
      seen_ids.erase(tr.id);
      continue;
    }
    result.dataset.trajectories.push_back(std::move(tr));
  }

  check_reject_ratio(result, opts, records);
  if (result.dataset.trajectories.empty()) {
    throw EmptyDataset("no valid trajectory records in input");
  }
  return result;
}

ParseResult parse_porto_csv(std::istream& in, double sampling_interval,
                            const ParseOptions& opts, std::string source) {
  if (!(sampling_interval > 0.0)) {
    throw InvalidConfig("sampling interval must be positive");
  }
  ParseResult result;
  result.dataset.source = std::move(source);

  std::vector<std::string> fields;
  std::size_t line_no = 0;
  if (!read_csv_record(in, fields, line_no)) {
    throw EmptyDataset("empty CSV input");
  }
  std::unordered_map<std::string, std::size_t> columns;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    columns[fields[i]] = i;
  }
  for (const char* required : {"TRIP_ID", "TIMESTAMP", "POLYLINE"}) {
    if (!columns.count(required)) {
      throw MalformedRecord(std::string("CSV header lacks required column ") +
                            required);
    }
  }
  const std::size_t id_col = columns.at("TRIP_ID");
  const std::size_t ts_col = columns.at("TIMESTAMP");
  const std::size_t poly_col = columns.at("POLYLINE");
  const std::optional<std::size_t> missing_col =
      columns.count("MISSING_DATA")
          ? std::optional<std::size_t>(columns.at("MISSING_DATA"))
          : std::nullopt;
  const std::size_t max_col =
      std::max({id_col, ts_col, poly_col, missing_col.value_or(0)});

  std::unordered_set<std::string> seen_ids;
  std::size_t records = 0;
  while (read_csv_record(in, fields, line_no)) {
    if (fields.size() == 1 && fields[0].empty()) {
      continue;  // trailing newline
    }
    ++records;
    if (fields.size() <= max_col) {
      result.rejects.push_back({line_no, "too few columns"});
      continue;
    }
    if (missing_col && lower(fields[*missing_col]) == "true") {
      ++result.skipped;
      continue;
    }
    json poly = json::parse(fields[poly_col], nullptr, false);
    if (poly.is_discarded() || !poly.is_array()) {
      result.rejects.push_back({line_no, "unparseable POLYLINE"});
      continue;
    }
    if (poly.empty()) {
      ++result.skipped;
      continue;
    }
    double start_time = 0.0;
    try {
      start_time = std::stod(fields[ts_col]);
    } catch (const std::exception&) {
      result.rejects.push_back({line_no, "non-numeric TIMESTAMP"});
      continue;
    }
    RawTrajectory tr;
    tr.id = fields[id_col];
    if (!seen_ids.insert(tr.id).second) {
      result.rejects.push_back({line_no, "duplicate TRIP_ID '" + tr.id + "'"});
      continue;
    }
    bool ok = true;
    tr.points.reserve(poly.size());
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const auto& pair = poly[k];
      if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
          !pair[1].is_number()) {
        ok = false;
        result.rejects.push_back({line_no, "POLYLINE entry is not [lon, lat]"});
        break;
      }
      tr.points.push_back(RawPoint{pair[0].get<double>(), pair[1].get<double>(),
                                   start_time + static_cast<double>(k) *
                                                    sampling_interval});
    }
    if (!ok) {
      seen_ids.erase(tr.id);
      continue;
    }
    result.dataset.trajectories.push_back(std::move(tr));
  }

  check_reject_ratio(result, opts, records);
  if (result.dataset.trajectories.empty()) {
    throw EmptyDataset("no usable trips in CSV input");
  }
  return result;
}

double seconds_of_day(double epoch_seconds) {
  double r = std::fmod(epoch_seconds, 86400.0);
  if (r < 0.0) {
    r += 86400.0;
  }
  return r;
}

RawDataset filter_dataset(const RawDataset& ds, const SpatioTemporalDomain& dom,
                          TimeMode mode) {
  dom.validate();
  RawDataset out;
  out.source = ds.source;
  for (const RawTrajectory& tr : ds.trajectories) {
    RawTrajectory kept;
    kept.id = tr.id;
    bool monotonic = true;
    for (const RawPoint& p : tr.points) {
      RawPoint q = p;
      if (mode == TimeMode::time_of_day) {
        q.time = seconds_of_day(p.time);
      }
      if (!dom.contains(q)) {
        continue;
      }
      if (!kept.points.empty() && q.time < kept.points.back().time) {
        monotonic = false;
        break;
      }
      kept.points.push_back(q);
    }
    if (monotonic && !kept.points.empty()) {
      out.trajectories.push_back(std::move(kept));
    }
  }
  return out;
}

}  // namespace dpstts
