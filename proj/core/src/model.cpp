#include "dpstts/model.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <utility>

#include "json.hpp"

namespace dpstts {

namespace {

using nlohmann::json;

json budget_value(double v) {
  if (is_noise_off(v)) {
    return json("inf");
  }
  return json(v);
}

double budget_from(const json& j, const char* key) {
  const json& v = j.at(key);
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") {
      return kNoiseOff;
    }
    throw CorruptModelFile(std::string("budget field ") + key +
                           " holds an unknown string");
  }
  return v.get<double>();
}

void require(bool cond, const std::string& what) {
  if (!cond) {
    throw CorruptModelFile(what);
  }
}

}  // namespace

std::vector<std::int64_t> count_starts(const std::vector<CubeTrajectory>& da,
                                       const GridSpec& grid) {
  std::vector<std::int64_t> counts(grid.cube_count(), 0);
  for (const CubeTrajectory& tr : da) {
    if (tr.cubes.empty()) {
      throw InvalidConfig("cube trajectory without cubes");
    }
    ++counts[cube_id(tr.cubes.front(), grid)];
  }
  return counts;
}

StartDistribution noisy_start_distribution(const std::vector<std::int64_t>& counts,
                                           double eps_s, NoiseSource& rng) {
  if (!(eps_s > 0.0)) {
    throw InvalidBudget("eps_s must be positive");
  }
  StartDistribution dist;
  dist.mass.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    dist.mass[i] = static_cast<double>(counts[i]);
  }
  if (!is_noise_off(eps_s)) {
    const double scale = 1.0 / eps_s;  // sensitivity of the start counts is 1
    for (double& m : dist.mass) {
      m += laplace_sample(scale, rng);
    }
  }
  double total = 0.0;
  for (double& m : dist.mass) {
    m = std::max(m, 0.0);
    total += m;
  }
  if (total <= 0.0) {
    const double uniform = 1.0 / static_cast<double>(dist.mass.size());
    std::fill(dist.mass.begin(), dist.mass.end(), uniform);
  } else {
    for (double& m : dist.mass) {
      m /= total;
    }
  }
  return dist;
}

FrequencyMatrix build_frequency_matrix(const std::vector<CubeTrajectory>& da,
                                       const GridSpec& grid) {
  FrequencyMatrix fm;
  fm.stop_column = static_cast<std::uint32_t>(grid.cube_count());
  fm.rows.resize(grid.cube_count());
  for (const CubeTrajectory& tr : da) {
    if (!tr.terminated || tr.cubes.empty()) {
      throw InvalidConfig("frequency matrix requires terminated, non-empty trajectories");
    }
    const double weight = 1.0 / static_cast<double>(tr.cubes.size());
    for (std::size_t j = 0; j + 1 < tr.cubes.size(); ++j) {
      if (!is_neighbor(tr.cubes[j], tr.cubes[j + 1], grid)) {
        throw NonNeighborTransition("trajectory holds a non-neighbor step at index " +
                                    std::to_string(j));
      }
      fm.rows[cube_id(tr.cubes[j], grid)][cube_id(tr.cubes[j + 1], grid)] += weight;
    }
    fm.rows[cube_id(tr.cubes.back(), grid)][fm.stop_column] += weight;
  }
  return fm;
}

FrequencyMatrix add_fm_noise(const FrequencyMatrix& fm, double eps_m,
                             NoiseSource& rng, const GridSpec& grid) {
  if (!(eps_m > 0.0)) {
    throw InvalidBudget("eps_m must be positive");
  }
  if (is_noise_off(eps_m)) {
    return fm;
  }
  const double scale = 1.0 / eps_m;  // sensitivity of the 2-gram query is 1
  FrequencyMatrix out;
  out.stop_column = fm.stop_column;
  out.rows.resize(fm.rows.size());
  for (std::size_t i = 0; i < fm.rows.size(); ++i) {
    const Cube cube = cube_from_id(static_cast<std::uint32_t>(i), grid);
    auto& row = out.rows[i];
    for (const Cube& nb : neighbors(cube, grid)) {
      const std::uint32_t col = cube_id(nb, grid);
      const auto it = fm.rows[i].find(col);
      const double base = it == fm.rows[i].end() ? 0.0 : it->second;
      row[col] = base + laplace_sample(scale, rng);
    }
    const auto it = fm.rows[i].find(fm.stop_column);
    const double base = it == fm.rows[i].end() ? 0.0 : it->second;
    row[fm.stop_column] = base + laplace_sample(scale, rng);
  }
  return out;
}

TransitionMatrix derive_transition_matrix(const FrequencyMatrix& fm_noisy) {
  TransitionMatrix tm;
  tm.stop_column = fm_noisy.stop_column;
  tm.rows.resize(fm_noisy.rows.size());
  for (std::size_t i = 0; i < fm_noisy.rows.size(); ++i) {
    TransitionRow& row = tm.rows[i];
    double sum = 0.0;
    for (const auto& [col, value] : fm_noisy.rows[i]) {
      const double clamped = std::max(value, 0.0);
      row.probs.emplace_back(col, clamped);
      sum += clamped;
    }
    if (sum > 0.0) {
      for (auto& [col, p] : row.probs) {
        p /= sum;
      }
    } else {
      row.probs.clear();
      row.all_zero = true;
    }
  }
  return tm;
}

SynthModel build_model(const std::vector<CubeTrajectory>& da,
                       const SpatioTemporalDomain& domain, const GridSpec& grid,
                       double epsilon, double delta_split, std::uint64_t seed,
                       std::string source, bool time_of_day) {
  if (da.empty()) {
    throw EmptyDataset("cannot build a model from an empty dataset");
  }
  domain.validate();
  grid.validate();

  SynthModel model;
  model.domain = domain;
  model.grid = grid;
  model.budget = split_budget(epsilon, delta_split);
  model.metadata.seed = seed;
  model.metadata.source_size = da.size();
  model.metadata.source = std::move(source);
  model.metadata.time_of_day = time_of_day;

  const std::vector<std::int64_t> counts = count_starts(da, grid);
  NoiseSource start_rng(seed, noise_stream::start_counts);
  model.start = noisy_start_distribution(counts, model.budget.eps_s, start_rng);

  const FrequencyMatrix fm = build_frequency_matrix(da, grid);
  NoiseSource fm_rng(seed, noise_stream::frequency_matrix);
  const FrequencyMatrix noisy = add_fm_noise(fm, model.budget.eps_m, fm_rng, grid);
  model.tm = derive_transition_matrix(noisy);
  return model;
}

std::string serialize_model(const SynthModel& model) {
  json doc;
  doc["format"] = "dpstts-model";
  doc["version"] = kModelFormatVersion;
  doc["domain"] = {{"left", model.domain.left},     {"right", model.domain.right},
                   {"bottom", model.domain.bottom}, {"top", model.domain.top},
                   {"s_time", model.domain.s_time}, {"e_time", model.domain.e_time}};
  doc["grid"] = {{"g_w", model.grid.g_w},
                 {"g_h", model.grid.g_h},
                 {"g_t", model.grid.g_t},
                 {"v", model.grid.v}};
  doc["budget"] = {{"epsilon", budget_value(model.budget.epsilon)},
                   {"delta_split", model.budget.delta_split},
                   {"eps_s", budget_value(model.budget.eps_s)},
                   {"eps_m", budget_value(model.budget.eps_m)}};
  doc["metadata"] = {{"seed", model.metadata.seed},
                     {"source_size", model.metadata.source_size},
                     {"source", model.metadata.source},
                     {"time_of_day", model.metadata.time_of_day}};
  doc["stop_column"] = model.tm.stop_column;
  doc["start"] = model.start.mass;
  json rows = json::array();
  for (std::size_t i = 0; i < model.tm.rows.size(); ++i) {
    const TransitionRow& row = model.tm.rows[i];
    if (row.all_zero) {
      continue;  // absent rows deserialize as all_zero
    }
    json cells = json::array();
    for (const auto& [col, p] : row.probs) {
      cells.push_back(json::array({col, p}));
    }
    rows.push_back({{"id", i}, {"p", std::move(cells)}});
  }
  doc["rows"] = std::move(rows);
  return doc.dump();
}

SynthModel deserialize_model(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  require(!doc.is_discarded() && doc.is_object(), "model file is not valid JSON");
  try {
    require(doc.at("format").get<std::string>() == "dpstts-model",
            "not a dpstts model file");
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw VersionMismatch("model format version " + std::to_string(version) +
                            " unsupported (expected " +
                            std::to_string(kModelFormatVersion) + ")");
    }

    SynthModel model;
    const json& dom = doc.at("domain");
    model.domain = {dom.at("left").get<double>(),   dom.at("right").get<double>(),
                    dom.at("bottom").get<double>(), dom.at("top").get<double>(),
                    dom.at("s_time").get<double>(), dom.at("e_time").get<double>()};
    const json& grid = doc.at("grid");
    model.grid = {grid.at("g_w").get<std::int32_t>(), grid.at("g_h").get<std::int32_t>(),
                  grid.at("g_t").get<std::int32_t>(), grid.at("v").get<std::int32_t>()};
    const json& budget = doc.at("budget");
    model.budget.epsilon = budget_from(budget, "epsilon");
    model.budget.delta_split = budget.at("delta_split").get<double>();
    model.budget.eps_s = budget_from(budget, "eps_s");
    model.budget.eps_m = budget_from(budget, "eps_m");
    const json& meta = doc.at("metadata");
    model.metadata.seed = meta.at("seed").get<std::uint64_t>();
    model.metadata.source_size = meta.at("source_size").get<std::uint64_t>();
    model.metadata.source = meta.at("source").get<std::string>();
    model.metadata.time_of_day = meta.at("time_of_day").get<bool>();

    model.domain.validate();
    model.grid.validate();
    const auto cube_count = static_cast<std::uint32_t>(model.grid.cube_count());
    model.tm.stop_column = doc.at("stop_column").get<std::uint32_t>();
    require(model.tm.stop_column == cube_count, "stop column does not match grid");

    model.start.mass = doc.at("start").get<std::vector<double>>();
    require(model.start.mass.size() == cube_count,
            "start vector does not match grid size");

    model.tm.rows.assign(cube_count, TransitionRow{{}, true});
    for (const json& row : doc.at("rows")) {
      const auto id = row.at("id").get<std::uint32_t>();
      require(id < cube_count, "row id out of range");
      TransitionRow& out = model.tm.rows[id];
      require(out.all_zero, "duplicate row id");
      out.all_zero = false;
      std::uint32_t prev_col = 0;
      bool first = true;
      for (const json& cell : row.at("p")) {
        require(cell.is_array() && cell.size() == 2, "malformed row cell");
        const auto col = cell[0].get<std::uint32_t>();
        require(col <= cube_count, "column id out of range");
        require(first || col > prev_col, "row columns not ascending");
        out.probs.emplace_back(col, cell[1].get<double>());
        prev_col = col;
        first = false;
      }
    }
    return model;
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw CorruptModelFile(std::string("model file malformed: ") + e.what());
  }
}

void save_model(const SynthModel& model, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw IoError("cannot open for writing: " + tmp);
    }
    out << serialize_model(model) << '\n';
    if (!out) {
      throw IoError("write failed: " + tmp);
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw IoError("cannot rename " + tmp + " to " + path + ": " + ec.message());
  }
}

SynthModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open model file: " + path);
  }
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return deserialize_model(text);
}

}  // namespace dpstts
