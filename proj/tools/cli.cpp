#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dpstts/dp.hpp"
#include "dpstts/grid.hpp"
#include "dpstts/metrics.hpp"
#include "dpstts/model.hpp"
#include "dpstts/synth.hpp"

namespace dpstts::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void log(const std::string& msg) { std::cerr << "[dpstts] " << msg << "\n"; }

std::string fmt(double v) {
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  std::ostringstream os;
  os << v;
  return os.str();
}

std::vector<double> split_doubles(const std::string& text, char sep) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw InvalidConfig("cannot parse number '" + item + "' in '" + text + "'");
    }
  }
  return out;
}

std::vector<std::int64_t> split_ints(const std::string& text, char sep) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    try {
      out.push_back(std::stoll(item));
    } catch (const std::exception&) {
      throw InvalidConfig("cannot parse integer '" + item + "' in '" + text + "'");
    }
  }
  return out;
}

// "lat_min,lon_min,lat_max,lon_max" -> domain box (time window filled later).
SpatioTemporalDomain parse_bbox(const std::string& text) {
  const std::vector<double> v = split_doubles(text, ',');
  if (v.size() != 4) {
    throw InvalidConfig("--bbox expects lat_min,lon_min,lat_max,lon_max");
  }
  SpatioTemporalDomain dom;
  dom.bottom = v[0];
  dom.left = v[1];
  dom.top = v[2];
  dom.right = v[3];
  return dom;
}

struct TimeWindow {
  double s = 0.0;
  double e = 0.0;
  TimeMode mode = TimeMode::absolute;
};

bool parse_hhmm(const std::string& text, double& seconds) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    return false;
  }
  int h = 0, m = 0;
  const auto hr = std::from_chars(text.data(), text.data() + colon, h);
  const auto mr = std::from_chars(text.data() + colon + 1, text.data() + text.size(), m);
  if (hr.ec != std::errc() || mr.ec != std::errc() ||
      mr.ptr != text.data() + text.size() || h < 0 || h > 24 || m < 0 || m > 59) {
    return false;
  }
  seconds = h * 3600.0 + m * 60.0;
  return true;
}

// "HH:MM-HH:MM" (time of day) or "<epoch>-<epoch>" (absolute seconds).
TimeWindow parse_time_window(const std::string& text) {
  const auto dash = text.find('-');
  if (dash == std::string::npos) {
    throw InvalidConfig("--time-window expects HH:MM-HH:MM or <epoch>-<epoch>");
  }
  const std::string lhs = text.substr(0, dash);
  const std::string rhs = text.substr(dash + 1);
  TimeWindow w;
  if (lhs.find(':') != std::string::npos) {
    if (!parse_hhmm(lhs, w.s) || !parse_hhmm(rhs, w.e)) {
      throw InvalidConfig("cannot parse time-of-day window '" + text + "'");
    }
    w.mode = TimeMode::time_of_day;
  } else {
    const std::vector<std::int64_t> v = {split_ints(lhs, ',').at(0),
                                         split_ints(rhs, ',').at(0)};
    w.s = static_cast<double>(v[0]);
    w.e = static_cast<double>(v[1]);
    w.mode = TimeMode::absolute;
  }
  if (!(w.s < w.e)) {
    throw InvalidConfig("time window start must precede end (overnight windows unsupported)");
  }
  return w;
}

GridSpec parse_grid_spec(const std::string& text, std::int32_t v) {
  const std::vector<std::int64_t> parts = split_ints(text, 'x');
  if (parts.size() != 3) {
    throw InvalidConfig("--grid expects WxHxT, e.g. 20x20x16");
  }
  GridSpec g{static_cast<std::int32_t>(parts[0]), static_cast<std::int32_t>(parts[1]),
             static_cast<std::int32_t>(parts[2]), v};
  g.validate();
  if (g.cube_count() > (std::int64_t{1} << 31)) {
    throw InvalidConfig("grid has too many cubes");
  }
  return g;
}

EvalGrid parse_eval_grid(const std::string& text) {
  const std::vector<std::int64_t> parts = split_ints(text, 'x');
  if (parts.size() != 2) {
    throw InvalidConfig("--eval-grid expects WxH, e.g. 20x20");
  }
  EvalGrid g{static_cast<std::int32_t>(parts[1]), static_cast<std::int32_t>(parts[0])};
  g.validate();
  return g;
}

EvalParams make_eval_params(const EvalSettings& s) {
  EvalParams p;
  p.grid = parse_eval_grid(s.eval_grid);
  p.sanity_fraction = s.sanity_fraction;
  p.top_k = s.top_k;
  p.bin_seconds = s.bin_minutes * 60.0;
  p.length_buckets = s.length_buckets;
  if (!(p.sanity_fraction > 0.0)) {
    throw InvalidConfig("--sanity-fraction must be positive");
  }
  return p;
}

RawDataset load_dataset(const DataConfig& cfg) {
  if (cfg.input.empty()) {
    throw InvalidConfig("--input is required");
  }
  std::ifstream in(cfg.input, std::ios::binary);
  if (!in) {
    throw IoError("cannot open input file: " + cfg.input);
  }
  ParseOptions opts;
  opts.reject_ratio = cfg.reject_ratio;
  ParseResult result;
  if (cfg.format == "jsonl") {
    result = parse_jsonl_dataset(in, opts, cfg.input);
  } else if (cfg.format == "porto-csv") {
    result = parse_porto_csv(in, cfg.sampling_interval, opts, cfg.input);
  } else {
    throw InvalidConfig("unknown --format '" + cfg.format + "'");
  }
  log("parsed " + std::to_string(result.dataset.trajectories.size()) +
      " trajectories from " + cfg.input + " (" +
      std::to_string(result.rejects.size()) + " rejected, " +
      std::to_string(result.skipped) + " skipped)");
  for (std::size_t i = 0; i < result.rejects.size() && i < 5; ++i) {
    log("  rejected line " + std::to_string(result.rejects[i].line) + ": " +
        result.rejects[i].reason);
  }
  return std::move(result.dataset);
}

struct ResolvedDomain {
  SpatioTemporalDomain dom;
  TimeMode mode = TimeMode::absolute;
};

// Domain from flags where given, otherwise from the data extent.
ResolvedDomain resolve_domain(const RawDataset& ds, const std::string& bbox,
                              const std::string& window) {
  ResolvedDomain r;
  bool have_points = false;
  double lon_lo = 0, lon_hi = 0, lat_lo = 0, lat_hi = 0, t_lo = 0, t_hi = 0;
  for (const RawTrajectory& tr : ds.trajectories) {
    for (const RawPoint& p : tr.points) {
      if (!have_points) {
        lon_lo = lon_hi = p.lon;
        lat_lo = lat_hi = p.lat;
        t_lo = t_hi = p.time;
        have_points = true;
      } else {
        lon_lo = std::min(lon_lo, p.lon);
        lon_hi = std::max(lon_hi, p.lon);
        lat_lo = std::min(lat_lo, p.lat);
        lat_hi = std::max(lat_hi, p.lat);
        t_lo = std::min(t_lo, p.time);
        t_hi = std::max(t_hi, p.time);
      }
    }
  }

  if (!bbox.empty()) {
    r.dom = parse_bbox(bbox);
  } else {
    if (!have_points) {
      throw EmptyDataset("cannot derive a bounding box from an empty dataset");
    }
    r.dom.left = lon_lo;
    r.dom.right = lon_hi > lon_lo ? lon_hi : lon_lo + 1e-6;
    r.dom.bottom = lat_lo;
    r.dom.top = lat_hi > lat_lo ? lat_hi : lat_lo + 1e-6;
    log("bounding box from data extent: lat " + fmt(r.dom.bottom) + ".." +
        fmt(r.dom.top) + ", lon " + fmt(r.dom.left) + ".." + fmt(r.dom.right));
  }
  if (!window.empty()) {
    const TimeWindow w = parse_time_window(window);
    r.dom.s_time = w.s;
    r.dom.e_time = w.e;
    r.mode = w.mode;
  } else {
    if (!have_points) {
      throw EmptyDataset("cannot derive a time window from an empty dataset");
    }
    r.dom.s_time = t_lo;
    r.dom.e_time = t_hi > t_lo ? t_hi : t_lo + 1.0;
    r.mode = TimeMode::absolute;
    log("time window from data extent: " + fmt(r.dom.s_time) + ".." +
        fmt(r.dom.e_time));
  }
  r.dom.validate();
  return r;
}

RawDataset filter_logged(const RawDataset& ds, const SpatioTemporalDomain& dom,
                         TimeMode mode) {
  RawDataset filtered = filter_dataset(ds, dom, mode);
  log("filtered to " + std::to_string(filtered.trajectories.size()) +
      " trajectories (" +
      std::to_string(ds.trajectories.size() - filtered.trajectories.size()) +
      " dropped)");
  if (filtered.trajectories.empty()) {
    throw EmptyDataset("no trajectory survives the domain filter");
  }
  return filtered;
}

std::vector<CubeTrajectory> discretize_all(const RawDataset& ds,
                                           const SpatioTemporalDomain& dom,
                                           const GridSpec& grid) {
  std::vector<CubeTrajectory> cubes;
  cubes.reserve(ds.trajectories.size());
  for (const RawTrajectory& tr : ds.trajectories) {
    try {
      cubes.push_back(discretize_trajectory(tr.points, dom, grid));
    } catch (const Error& e) {
      throw Error(e.code(), "trajectory '" + tr.id + "': " + e.what());
    }
  }
  return cubes;
}

void atomic_write(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot open for writing: " + tmp);
    }
    out << contents;
    if (!out) {
      throw IoError("write failed: " + tmp);
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    throw IoError("cannot rename " + tmp + " to " + path + ": " + ec.message());
  }
}

std::string report_base(const std::string& out) {
  if (out.size() > 5 && out.ends_with(".json")) {
    return out.substr(0, out.size() - 5);
  }
  return out;
}

void write_report_files(const std::string& out, const std::string& report_doc,
                        std::span<const double> hist_real,
                        std::span<const double> hist_syn,
                        const SpatioTemporalDomain& dom, double bin_seconds) {
  atomic_write(out, report_doc + "\n");
  const std::string base = report_base(out);
  for (const auto& [name, hist] :
       {std::pair{std::string("_temporal_real.csv"), hist_real},
        std::pair{std::string("_temporal_syn.csv"), hist_syn}}) {
    std::ostringstream csv;
    write_histogram_csv(csv, hist, dom, bin_seconds);
    atomic_write(base + name, csv.str());
  }
  log("report written: " + out);
}

struct RunAggregate {
  std::vector<MetricsReport> runs;

  MetricsReport mean() const {
    MetricsReport m = runs.front();
    if (runs.size() == 1) {
      return m;
    }
    const double n = static_cast<double>(runs.size());
    m.temporal_jsd = m.location_avre = m.location_kt = 0.0;
    m.fp_kt = m.trip_error = m.length_error = 0.0;
    std::fill(m.temporal_hist_syn.begin(), m.temporal_hist_syn.end(), 0.0);
    for (const MetricsReport& r : runs) {
      m.temporal_jsd += r.temporal_jsd / n;
      m.location_avre += r.location_avre / n;
      m.location_kt += r.location_kt / n;
      m.fp_kt += r.fp_kt / n;
      m.trip_error += r.trip_error / n;
      m.length_error += r.length_error / n;
      for (std::size_t i = 0; i < m.temporal_hist_syn.size(); ++i) {
        m.temporal_hist_syn[i] += r.temporal_hist_syn[i] / n;
      }
    }
    return m;
  }
};

std::string aggregate_report_json(const RunAggregate& agg, const EvalParams& params,
                                  std::size_t real_count, std::size_t syn_count) {
  const MetricsReport mean = agg.mean();
  json doc = json::parse(report_to_json(mean, params, real_count, syn_count));
  doc["runs"] = agg.runs.size();
  if (agg.runs.size() > 1) {
    json per_run = json::array();
    for (const MetricsReport& r : agg.runs) {
      per_run.push_back({{"temporal_jsd", r.temporal_jsd},
                         {"location_avre", r.location_avre},
                         {"location_kt", r.location_kt},
                         {"fp_kt", r.fp_kt},
                         {"trip_error", r.trip_error},
                         {"length_error", r.length_error}});
    }
    doc["per_run"] = std::move(per_run);
  }
  return doc.dump();
}

void log_scores(const std::string& label, const MetricsReport& r) {
  log(label + ": avre=" + fmt(r.location_avre) + " kt=" + fmt(r.location_kt) +
      " fp_kt=" + fmt(r.fp_kt) + " trip=" + fmt(r.trip_error) +
      " length=" + fmt(r.length_error) + " temporal_jsd=" + fmt(r.temporal_jsd));
}

std::string epsilon_tag(double eps) {
  std::string tag = fmt(eps);
  for (char& c : tag) {
    if (c == '.') {
      c = 'p';
    }
  }
  return tag;
}

}  // namespace

void write_jsonl(const RawDataset& ds, const std::string& path) {
  std::ostringstream out;
  for (const RawTrajectory& tr : ds.trajectories) {
    json points = json::array();
    for (const RawPoint& p : tr.points) {
      points.push_back(json::array({p.lon, p.lat, p.time}));
    }
    out << json{{"id", tr.id}, {"points", std::move(points)}}.dump() << '\n';
  }
  atomic_write(path, out.str());
}

int cmd_build(const BuildArgs& args) {
  if (args.model.empty()) {
    throw InvalidConfig("--model output path is required");
  }
  const RawDataset raw = load_dataset(args.data);
  const ResolvedDomain resolved =
      resolve_domain(raw, args.data.bbox, args.data.time_window);
  const RawDataset filtered = filter_logged(raw, resolved.dom, resolved.mode);
  const GridSpec grid = parse_grid_spec(args.grid, args.v);
  const std::vector<CubeTrajectory> cubes =
      discretize_all(filtered, resolved.dom, grid);

  const SynthModel model = build_model(
      cubes, resolved.dom, grid, args.epsilon, args.delta, args.seed,
      args.data.input, resolved.mode == TimeMode::time_of_day);
  log("privacy budget: epsilon=" + fmt(model.budget.epsilon) + " (eps_s=" +
      fmt(model.budget.eps_s) + ", eps_m=" + fmt(model.budget.eps_m) +
      "), consumed eps_s+eps_m=" + fmt(model.budget.eps_s + model.budget.eps_m));
  save_model(model, args.model);
  log("model written: " + args.model);
  return 0;
}

int cmd_synthesize(const SynthesizeArgs& args) {
  if (args.model.empty() || args.out.empty()) {
    throw InvalidConfig("--model and --out are required");
  }
  const SynthModel model = load_model(args.model);
  GenerationConfig cfg;
  cfg.count = args.count != 0 ? args.count : model.metadata.source_size;
  if (cfg.count == 0) {
    throw InvalidConfig("model metadata has no source size; pass --count");
  }
  cfg.max_len = args.max_len;
  cfg.seed = args.seed;
  const RawDataset syn = generate_dataset(model, cfg);
  write_jsonl(syn, args.out);
  log("synthesized " + std::to_string(cfg.count) + " trajectories (max_len=" +
      std::to_string(cfg.max_len) + ", seed=" + std::to_string(cfg.seed) +
      ") to " + args.out);
  return 0;
}

int cmd_evaluate(const EvaluateArgs& args) {
  if (args.out.empty()) {
    throw InvalidConfig("--out report path is required");
  }
  if (args.runs < 1) {
    throw InvalidConfig("--runs must be >= 1");
  }
  const bool generate = args.synthetic.empty();
  if (generate && args.model.empty()) {
    throw InvalidConfig("pass --synthetic, or --model to generate internally");
  }
  if (!generate && args.runs > 1) {
    throw InvalidConfig("--runs > 1 regenerates per run and needs --model, not --synthetic");
  }

  const RawDataset raw = load_dataset(args.data);
  SynthModel model;
  ResolvedDomain resolved;
  if (!args.model.empty()) {
    model = load_model(args.model);
    resolved.dom = model.domain;
    resolved.mode = model.metadata.time_of_day ? TimeMode::time_of_day
                                               : TimeMode::absolute;
  } else {
    resolved = resolve_domain(raw, args.data.bbox, args.data.time_window);
  }
  const RawDataset real = filter_logged(raw, resolved.dom, resolved.mode);
  const EvalParams params = make_eval_params(args.eval);

  RunAggregate agg;
  std::size_t syn_count = 0;
  if (generate) {
    GenerationConfig cfg;
    cfg.count = args.count != 0 ? args.count : model.metadata.source_size;
    if (cfg.count == 0) {
      throw InvalidConfig("model metadata has no source size; pass --count");
    }
    cfg.max_len = args.max_len;
    for (int r = 0; r < args.runs; ++r) {
      cfg.seed = args.seed + static_cast<std::uint64_t>(r);
      const RawDataset syn = generate_dataset(model, cfg);
      syn_count = syn.trajectories.size();
      agg.runs.push_back(evaluate_all(real, syn, resolved.dom, params));
      log_scores("run " + std::to_string(r) + " (seed " +
                     std::to_string(cfg.seed) + ")",
                 agg.runs.back());
    }
  } else {
    std::ifstream in(args.synthetic, std::ios::binary);
    if (!in) {
      throw IoError("cannot open synthetic dataset: " + args.synthetic);
    }
    ParseOptions opts;
    RawDataset syn = parse_jsonl_dataset(in, opts, args.synthetic).dataset;
    syn = filter_dataset(syn, resolved.dom, resolved.mode);
    if (syn.trajectories.empty()) {
      throw EmptyDataset("synthetic dataset has no in-domain trajectory");
    }
    syn_count = syn.trajectories.size();
    agg.runs.push_back(evaluate_all(real, syn, resolved.dom, params));
  }

  const MetricsReport mean = agg.mean();
  if (agg.runs.size() > 1) {
    log_scores("mean over " + std::to_string(agg.runs.size()) + " runs", mean);
  } else {
    log_scores("scores", mean);
  }
  write_report_files(args.out,
                     aggregate_report_json(agg, params, real.trajectories.size(),
                                           syn_count),
                     mean.temporal_hist_real, mean.temporal_hist_syn,
                     resolved.dom, params.bin_seconds);
  return 0;
}

int cmd_pipeline(const PipelineArgs& args) {
  if (args.out.empty()) {
    throw InvalidConfig("--out output directory is required");
  }
  if (args.runs < 1) {
    throw InvalidConfig("--runs must be >= 1");
  }
  std::error_code ec;
  fs::create_directories(args.out, ec);
  if (ec) {
    throw IoError("cannot create output directory " + args.out + ": " +
                  ec.message());
  }

  const RawDataset raw = load_dataset(args.data);
  const ResolvedDomain resolved =
      resolve_domain(raw, args.data.bbox, args.data.time_window);
  const RawDataset real = filter_logged(raw, resolved.dom, resolved.mode);
  const GridSpec grid = parse_grid_spec(args.grid, args.v);
  const std::vector<CubeTrajectory> cubes =
      discretize_all(real, resolved.dom, grid);
  const EvalParams params = make_eval_params(args.eval);

  std::vector<double> epsilons = args.epsilons;
  if (epsilons.empty()) {
    epsilons.push_back(args.epsilon);
  }

  json summary;
  summary["format"] = "dpstts-summary";
  summary["epsilons"] = epsilons;
  summary["runs"] = args.runs;
  summary["seed"] = args.seed;
  json per_eps = json::object();

  for (const double eps : epsilons) {
    const std::string tag = epsilon_tag(eps);
    log("=== epsilon " + fmt(eps) + " ===");
    const SynthModel model =
        build_model(cubes, resolved.dom, grid, eps, args.delta, args.seed,
                    args.data.input, resolved.mode == TimeMode::time_of_day);
    const std::string model_path =
        (fs::path(args.out) / ("model_eps" + tag + ".json")).string();
    save_model(model, model_path);
    log("model written: " + model_path);

    GenerationConfig cfg;
    cfg.count = args.count != 0 ? args.count : model.metadata.source_size;
    cfg.max_len = args.max_len;
    RunAggregate agg;
    std::size_t syn_count = 0;
    for (int r = 0; r < args.runs; ++r) {
      cfg.seed = args.seed + static_cast<std::uint64_t>(r);
      const RawDataset syn = generate_dataset(model, cfg);
      syn_count = syn.trajectories.size();
      const std::string syn_path =
          (fs::path(args.out) /
           ("syn_eps" + tag + "_run" + std::to_string(r) + ".jsonl"))
              .string();
      write_jsonl(syn, syn_path);
      agg.runs.push_back(evaluate_all(real, syn, resolved.dom, params));
      log_scores("run " + std::to_string(r), agg.runs.back());
    }
    const MetricsReport mean = agg.mean();
    log_scores("epsilon " + fmt(eps) + " mean", mean);
    const std::string report_path =
        (fs::path(args.out) / ("report_eps" + tag + ".json")).string();
    write_report_files(report_path,
                       aggregate_report_json(agg, params,
                                             real.trajectories.size(), syn_count),
                       mean.temporal_hist_real, mean.temporal_hist_syn,
                       resolved.dom, params.bin_seconds);
    per_eps[fmt(eps)] = {{"location_avre", mean.location_avre},
                         {"location_kt", mean.location_kt},
                         {"fp_kt", mean.fp_kt},
                         {"trip_error", mean.trip_error},
                         {"length_error", mean.length_error},
                         {"temporal_jsd", mean.temporal_jsd}};
  }
  summary["metrics"] = std::move(per_eps);
  atomic_write((fs::path(args.out) / "summary.json").string(),
               summary.dump() + "\n");
  log("summary written: " + (fs::path(args.out) / "summary.json").string());
  return 0;
}

namespace {

void add_data_options(CLI::App* cmd, DataConfig& data) {
  cmd->add_option("--input", data.input, "Input dataset path")->required();
  cmd->add_option("--format", data.format, "Input format")
      ->check(CLI::IsMember({"jsonl", "porto-csv"}))
      ->capture_default_str();
  cmd->add_option("--bbox", data.bbox,
                  "Bounding box lat_min,lon_min,lat_max,lon_max (default: data extent)");
  cmd->add_option("--time-window", data.time_window,
                  "HH:MM-HH:MM (time of day) or <epoch>-<epoch> (default: data extent)");
  cmd->add_option("--sampling-interval", data.sampling_interval,
                  "Seconds between Porto polyline points")
      ->capture_default_str();
  cmd->add_option("--reject-ratio", data.reject_ratio,
                  "Malformed-record fraction tolerated before aborting")
      ->capture_default_str();
}

void add_eval_options(CLI::App* cmd, EvalSettings& eval) {
  cmd->add_option("--eval-grid", eval.eval_grid, "Evaluation grid WxH")
      ->capture_default_str();
  cmd->add_option("--sanity-fraction", eval.sanity_fraction,
                  "Sanity bound as a fraction of |D|")
      ->capture_default_str();
  cmd->add_option("--top-k", eval.top_k, "Top-k frequent patterns")
      ->capture_default_str();
  cmd->add_option("--bin-minutes", eval.bin_minutes, "Temporal bin width")
      ->capture_default_str();
  cmd->add_option("--length-buckets", eval.length_buckets,
                  "Equal-width trajectory length buckets")
      ->capture_default_str();
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"DP-STTS: differentially private spatiotemporal trajectory synthesis"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a TOML/INI file");

  BuildArgs build_args;
  CLI::App* build = app.add_subcommand("build", "Build a private model from raw trajectories");
  add_data_options(build, build_args.data);
  build->add_option("--grid", build_args.grid, "Model grid WxHxT")->capture_default_str();
  build->add_option("--v", build_args.v, "Dwell-jump bound")->capture_default_str();
  build->add_option("--epsilon", build_args.epsilon, "Privacy budget (inf disables noise)")
      ->capture_default_str();
  build->add_option("--delta", build_args.delta, "Budget share of the start distribution")
      ->capture_default_str();
  build->add_option("--seed", build_args.seed, "Noise seed")->capture_default_str();
  build->add_option("--model", build_args.model, "Model output path")->required();

  SynthesizeArgs synth_args;
  CLI::App* synth = app.add_subcommand("synthesize", "Generate synthetic trajectories from a model");
  synth->add_option("--model", synth_args.model, "Model path")->required();
  synth->add_option("--count", synth_args.count,
                    "Trajectories to generate (default: source dataset size)");
  synth->add_option("--max-len", synth_args.max_len, "Cube cap per trajectory")
      ->capture_default_str();
  synth->add_option("--seed", synth_args.seed, "Generation seed")->capture_default_str();
  synth->add_option("--out", synth_args.out, "Output JSONL path")->required();

  EvaluateArgs eval_args;
  CLI::App* eval = app.add_subcommand("evaluate", "Score a synthetic dataset against the original");
  add_data_options(eval, eval_args.data);
  eval->add_option("--synthetic", eval_args.synthetic, "Synthetic dataset (JSONL)");
  eval->add_option("--model", eval_args.model,
                   "Model path (domain source; enables internal generation)");
  eval->add_option("--runs", eval_args.runs,
                   "Synthesize+evaluate repetitions with derived seeds")
      ->capture_default_str();
  eval->add_option("--count", eval_args.count, "Trajectories per generated run");
  eval->add_option("--max-len", eval_args.max_len, "Cube cap per trajectory")
      ->capture_default_str();
  eval->add_option("--seed", eval_args.seed, "Base generation seed")->capture_default_str();
  add_eval_options(eval, eval_args.eval);
  eval->add_option("--out", eval_args.out, "Report output path")->required();

  PipelineArgs pipe_args;
  CLI::App* pipe = app.add_subcommand("pipeline", "Chain build, synthesize and evaluate");
  add_data_options(pipe, pipe_args.data);
  pipe->add_option("--grid", pipe_args.grid, "Model grid WxHxT")->capture_default_str();
  pipe->add_option("--v", pipe_args.v, "Dwell-jump bound")->capture_default_str();
  pipe->add_option("--epsilon", pipe_args.epsilon, "Privacy budget")->capture_default_str();
  pipe->add_option("--epsilons", pipe_args.epsilons, "Budget sweep, e.g. 0.5,1")
      ->delimiter(',');
  pipe->add_option("--delta", pipe_args.delta, "Budget share of the start distribution")
      ->capture_default_str();
  pipe->add_option("--seed", pipe_args.seed, "Base seed")->capture_default_str();
  pipe->add_option("--runs", pipe_args.runs, "Runs per epsilon")->capture_default_str();
  pipe->add_option("--count", pipe_args.count, "Trajectories per generated run");
  pipe->add_option("--max-len", pipe_args.max_len, "Cube cap per trajectory")
      ->capture_default_str();
  add_eval_options(pipe, pipe_args.eval);
  pipe->add_option("--out", pipe_args.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (build->parsed()) {
      return cmd_build(build_args);
    }
    if (synth->parsed()) {
      return cmd_synthesize(synth_args);
    }
    if (eval->parsed()) {
      return cmd_evaluate(eval_args);
    }
    if (pipe->parsed()) {
      return cmd_pipeline(pipe_args);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return static_cast<int>(ErrorCode::internal);
  }
  return 0;
}

}  // namespace dpstts::cli
