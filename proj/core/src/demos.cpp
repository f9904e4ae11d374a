#include "odirl/demos.hpp"

#include <fstream>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "odirl/csv.hpp"

namespace odirl::buffers {

DemoSet::DemoSet(std::vector<Trajectory> trajectories, DemoMetadata metadata)
    : trajectories_(std::move(trajectories)), metadata_(std::move(metadata)) {
  for (const auto& traj : trajectories_) {
    for (const auto& t : traj) {
      if (t.domain != Domain::kSource) throw Error("demo set: every demonstration must be source-tagged");
      flat_.push_back(t);
    }
  }
  if (flat_.empty()) throw Error("demo set: no transitions");
}

TransitionBatch DemoSet::sample_batch(std::size_t n, Rng& rng) const {
  std::uniform_int_distribution<std::size_t> pick(0, flat_.size() - 1);
  std::vector<Transition> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(flat_[pick(rng)]);
  return stack(std::span<const Transition>(out));
}

void save_demos(const std::string& path, const DemoSet& demos, int state_dim, int action_dim) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  nlohmann::json meta{{"env_config_hash", demos.metadata().env_config_hash},
                      {"expert_seed", demos.metadata().expert_seed},
                      {"horizon", demos.metadata().horizon}};
  os << meta.dump() << '\n';
  env::write_trajectories_csv(os, demos.trajectories(), state_dim, action_dim);
  if (!os) throw Error("failed writing demos to '" + path + "'");
}

LoadedDemos load_demos(const std::string& path, const env::EnvSpec& spec, const std::string& expected_hash) {
  std::vector<std::string> preamble;
  csv::Table table = csv::read_file(path, &preamble);
  DemoMetadata meta;
  for (const auto& line : preamble) {
    if (line.empty() || line.front() != '{') continue;
    try {
      auto j = nlohmann::json::parse(line);
      meta.env_config_hash = j.value("env_config_hash", std::string());
      meta.expert_seed = j.value("expert_seed", std::uint64_t{0});
      meta.horizon = j.value("horizon", 0);
    } catch (const nlohmann::json::exception& e) {
      throw Error("demos '" + path + "': malformed metadata header: " + e.what());
    }
  }
  const int ds = spec.state_dim;
  const int da = spec.action_dim;
  const std::size_t expected_cols = static_cast<std::size_t>(2 * ds + da + 2);
  if (table.header.size() != expected_cols) {
    throw Error("demos '" + path + "': header has " + std::to_string(table.header.size()) +
                " columns, environment expects " + std::to_string(expected_cols));
  }
  std::vector<Trajectory> trajs;
  Trajectory current;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    // Row numbers are 1-based data rows.
    const std::string where = "demos '" + path + "', row " + std::to_string(r + 1);
    if (row.size() != expected_cols) {
      throw Error(where + ": expected " + std::to_string(expected_cols) + " columns, got " +
                  std::to_string(row.size()));
    }
    Transition t;
    t.s.resize(ds);
    t.a.resize(da);
    t.s_next.resize(ds);
    try {
      for (int i = 0; i < ds; ++i) t.s[i] = csv::parse_double(row[static_cast<std::size_t>(i)]);
      for (int i = 0; i < da; ++i) t.a[i] = csv::parse_double(row[static_cast<std::size_t>(ds + i)]);
      for (int i = 0; i < ds; ++i) t.s_next[i] = csv::parse_double(row[static_cast<std::size_t>(ds + da + i)]);
      const std::string& done = row[expected_cols - 2];
      if (done != "0" && done != "1") throw Error("done must be 0 or 1");
      t.done = done == "1";
      t.domain = domain_from_string(row[expected_cols - 1]);
    } catch (const Error& e) {
      throw Error(where + ": " + e.what());
    }
    if (!t.s.allFinite() || !t.a.allFinite() || !t.s_next.allFinite()) throw Error(where + ": non-finite value");
    // A new trajectory starts wherever the chain s_{t} == s_next_{t-1} breaks.
    if (!current.empty() && (current.back().done || current.back().s_next != t.s)) {
      trajs.push_back(std::move(current));
      current.clear();
    }
    current.push_back(std::move(t));
  }
  if (!current.empty()) trajs.push_back(std::move(current));
  if (trajs.empty()) throw Error("demos '" + path + "': no transitions");

  LoadedDemos out{DemoSet(std::move(trajs), meta), {}};
  if (!expected_hash.empty() && meta.env_config_hash != expected_hash) {
    std::string w = "demos '" + path + "' were recorded under env config " + meta.env_config_hash +
                    ", current config is " + expected_hash;
    spdlog::warn("{}", w);
    out.warnings.push_back(std::move(w));
  }
  return out;
}

}  // namespace odirl::buffers
