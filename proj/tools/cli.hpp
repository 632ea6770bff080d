#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dpstts/ingest.hpp"

namespace dpstts::cli {

/// Input dataset location plus the domain/filter settings shared by the
/// commands that read raw data.
struct DataConfig {
  std::string input;
  std::string format = "jsonl";  // jsonl | porto-csv
  std::string bbox;              // "lat_min,lon_min,lat_max,lon_max"
  std::string time_window;       // "HH:MM-HH:MM" or "<epoch>-<epoch>"
  double sampling_interval = 15.0;
  double reject_ratio = 0.01;
};

struct BuildArgs {
  DataConfig data;
  std::string grid = "20x20x16";  // g_w x g_h x g_t
  std::int32_t v = 2;
  double epsilon = 1.0;
  double delta = 0.5;
  std::uint64_t seed = 0;
  std::string model;  // output path
};

struct SynthesizeArgs {
  std::string model;
  std::uint64_t count = 0;  // 0 = source dataset size from model metadata
  std::int32_t max_len = 125;
  std::uint64_t seed = 0;
  std::string out;
};

struct EvalSettings {
  std::string eval_grid = "20x20";  // cols x rows
  double sanity_fraction = 0.001;
  int top_k = 200;
  double bin_minutes = 15.0;
  int length_buckets = 20;
};

struct EvaluateArgs {
  DataConfig data;       // the real dataset
  std::string synthetic; // synthetic dataset path (single evaluation)
  std::string model;     // model path (domain source; required with --runs > 1)
  int runs = 1;
  std::uint64_t count = 0;
  std::int32_t max_len = 125;
  std::uint64_t seed = 0;
  EvalSettings eval;
  std::string out;  // report path; histogram CSVs are written next to it
};

struct PipelineArgs {
  DataConfig data;
  std::string grid = "20x20x16";
  std::int32_t v = 2;
  std::vector<double> epsilons;  // empty = {epsilon}
  double epsilon = 1.0;
  double delta = 0.5;
  std::uint64_t seed = 0;
  int runs = 1;
  std::uint64_t count = 0;
  std::int32_t max_len = 125;
  EvalSettings eval;
  std::string out;  // output directory
};

int cmd_build(const BuildArgs& args);
int cmd_synthesize(const SynthesizeArgs& args);
int cmd_evaluate(const EvaluateArgs& args);
int cmd_pipeline(const PipelineArgs& args);

/// Parses argv, dispatches, and maps every error class to its exit code.
int run_cli(int argc, char** argv);

/// Writes a dataset in the JSON-lines trajectory format (atomic: tmp + rename).
void write_jsonl(const RawDataset& ds, const std::string& path);

}  // namespace dpstts::cli
