#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "dpstts/metrics.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace dpstts;
namespace fs = std::filesystem;

namespace {

std::string cli_binary() {
  const char* env = std::getenv("DPSTTS_CLI");
  REQUIRE_MESSAGE(env != nullptr, "DPSTTS_CLI must point at the dpstts binary");
  return env;
}

int run(const std::string& args) {
  const std::string cmd = cli_binary() + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

int run_capture(const std::string& args, const fs::path& err_file,
                std::string& err_out) {
  const std::string cmd =
      cli_binary() + " " + args + " 2>" + err_file.string();
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  std::ifstream in(err_file);
  std::stringstream ss;
  ss << in.rdbuf();
  err_out = ss.str();
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const char* tag) {
    path = fs::temp_directory_path() / (std::string("dpstts_cli_") + tag);
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const char* name) const { return (path / name).string(); }
};

RawDataset small_dataset() {
  std::mt19937_64 rng(91);
  const SpatioTemporalDomain dom{0, 4, 0, 4, 0, 100};
  return oracle::random_raw_dataset(rng, dom, 40, 2, 10);
}

}  // namespace

TEST_CASE("a missing input file exits with the io code and names the path") {
  TempDir tmp("missing");
  std::string err;
  const int code = run_capture(
      "build --input " + (tmp / "nope.jsonl") + " --model " + (tmp / "m.json"),
      tmp.path / "err.txt", err);
  CHECK(code == static_cast<int>(ErrorCode::io));
  CHECK(err.find("nope.jsonl") != std::string::npos);
}

TEST_CASE("a corrupt model file exits with its own code") {
  TempDir tmp("corrupt");
  std::ofstream(tmp / "bad.json") << "{\"format\":\"nonsense\"}";
  CHECK(run("synthesize --model " + (tmp / "bad.json") + " --out " +
            (tmp / "syn.jsonl")) == static_cast<int>(ErrorCode::corrupt_model));
}

TEST_CASE("building twice with one seed produces byte-identical models") {
  TempDir tmp("rebuild");
  cli::write_jsonl(small_dataset(), tmp / "d.jsonl");
  const std::string common = "build --input " + (tmp / "d.jsonl") +
                             " --bbox 0,0,4,4 --time-window 0-100 "
                             "--grid 6x6x4 --v 2 --epsilon 1 --seed 42 --model ";
  std::string log;
  CHECK(run_capture(common + (tmp / "m1.json"), tmp.path / "log.txt", log) == 0);
  CHECK(log.find("consumed eps_s+eps_m=1") != std::string::npos);
  CHECK(run(common + (tmp / "m2.json")) == 0);
  CHECK(slurp(tmp / "m1.json") == slurp(tmp / "m2.json"));
}

TEST_CASE("synthesized output re-parses through ingest with the default count") {
  TempDir tmp("synt");
  const RawDataset d = small_dataset();
  cli::write_jsonl(d, tmp / "d.jsonl");
  CHECK(run("build --input " + (tmp / "d.jsonl") +
            " --bbox 0,0,4,4 --time-window 0-100 --grid 6x6x4 "
            "--epsilon 1 --seed 1 --model " + (tmp / "m.json")) == 0);
  CHECK(run("synthesize --model " + (tmp / "m.json") + " --seed 2 --out " +
            (tmp / "syn.jsonl")) == 0);

  std::ifstream in(tmp / "syn.jsonl");
  const ParseResult parsed = parse_jsonl_dataset(in);
  CHECK(parsed.rejects.empty());
  CHECK(parsed.dataset.trajectories.size() == d.trajectories.size());
  for (const auto& tr : parsed.dataset.trajectories) {
    CHECK(tr.points.size() <= 125);  // default max_len
  }
}

TEST_CASE("evaluating a dataset against itself reports perfect scores") {
  TempDir tmp("self");
  const SpatioTemporalDomain dom{0, 4, 0, 4, 0, 100};
  cli::write_jsonl(oracle::tie_free_dataset(dom, 4, 4), tmp / "d.jsonl");
  CHECK(run("evaluate --input " + (tmp / "d.jsonl") + " --synthetic " +
            (tmp / "d.jsonl") +
            " --bbox 0,0,4,4 --time-window 0-100 --eval-grid 4x4 "
            "--bin-minutes 0.5 --out " + (tmp / "report.json")) == 0);

  const nlohmann::json report = nlohmann::json::parse(slurp(tmp / "report.json"));
  CHECK(report.at("location_avre").get<double>() == 0.0);
  CHECK(report.at("location_kt").get<double>() == 1.0);
  CHECK(report.at("fp_kt").get<double>() == 1.0);
  CHECK(report.at("trip_error").get<double>() == 0.0);
  CHECK(report.at("length_error").get<double>() == 0.0);
  CHECK(report.at("temporal_jsd").get<double>() == 0.0);

  const std::string csv = slurp(tmp / "report_temporal_real.csv");
  CHECK(csv.rfind("bin_start_seconds,probability\n", 0) == 0);
  CHECK(slurp(tmp / "report_temporal_syn.csv") == csv);
}

TEST_CASE("the pipeline sweep writes models, datasets and reports per epsilon") {
  TempDir tmp("sweep");
  cli::write_jsonl(small_dataset(), tmp / "d.jsonl");
  CHECK(run("pipeline --input " + (tmp / "d.jsonl") +
            " --bbox 0,0,4,4 --time-window 0-100 --grid 6x6x4 "
            "--epsilons 0.5,1 --runs 2 --seed 9 --eval-grid 4x4 --top-k 20 "
            "--out " + (tmp / "out")) == 0);

  for (const char* name :
       {"model_eps0p5.json", "model_eps1.json", "report_eps0p5.json",
        "report_eps1.json", "syn_eps0p5_run0.jsonl", "syn_eps0p5_run1.jsonl",
        "syn_eps1_run0.jsonl", "syn_eps1_run1.jsonl", "summary.json"}) {
    CHECK_MESSAGE(fs::exists(tmp.path / "out" / name), name);
  }
  const nlohmann::json summary =
      nlohmann::json::parse(slurp(tmp.path / "out" / "summary.json"));
  CHECK(summary.at("metrics").contains("0.5"));
  CHECK(summary.at("metrics").contains("1"));
  const nlohmann::json report =
      nlohmann::json::parse(slurp(tmp.path / "out" / "report_eps1.json"));
  CHECK(report.at("runs").get<int>() == 2);
  CHECK(report.at("per_run").size() == 2);
}

TEST_CASE("evaluate with --runs regenerates and averages") {
  TempDir tmp("runs");
  cli::write_jsonl(small_dataset(), tmp / "d.jsonl");
  CHECK(run("build --input " + (tmp / "d.jsonl") +
            " --bbox 0,0,4,4 --time-window 0-100 --grid 6x6x4 "
            "--epsilon 1 --seed 4 --model " + (tmp / "m.json")) == 0);
  CHECK(run("evaluate --input " + (tmp / "d.jsonl") + " --model " +
            (tmp / "m.json") +
            " --runs 3 --seed 5 --eval-grid 4x4 --top-k 20 --out " +
            (tmp / "report.json")) == 0);
  const nlohmann::json report = nlohmann::json::parse(slurp(tmp / "report.json"));
  CHECK(report.at("runs").get<int>() == 3);
  REQUIRE(report.at("per_run").size() == 3);
  double mean = 0.0;
  for (const auto& r : report.at("per_run")) {
    mean += r.at("location_avre").get<double>() / 3.0;
  }
  CHECK(report.at("location_avre").get<double>() == doctest::Approx(mean).epsilon(1e-12));
}
