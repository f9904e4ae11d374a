#include "odirl/env.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "odirl/csv.hpp"
#include "odirl/link_chain.hpp"
#include "odirl/point_maze.hpp"

namespace odirl::env {

double Environment::ground_truth_reward(const Vec& state) const {
  return -(position(state) - spec().goal).norm();
}

bool Environment::in_goal(const Vec& state) const {
  return (position(state) - spec().goal).norm() <= spec().goal_radius;
}

std::string Environment::config_hash() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(config_json().dump())));
  return buf;
}

Vec Environment::clip_action(const Vec& action) const {
  const EnvSpec& sp = spec();
  if (action.size() != sp.action_dim) throw Error("step: action dimension mismatch");
  return action.cwiseMax(sp.action_low).cwiseMin(sp.action_high);
}

double ground_truth_reward(const Environment& env, const Vec& state) {
  return env.ground_truth_reward(state);
}

std::string DomainPair::config_hash() const {
  nlohmann::json j{{"source", source->config_json()}, {"target", target->config_json()}};
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a64(j.dump())));
  return buf;
}

void validate_pair(const DomainPair& pair) {
  if (!pair.source || !pair.target) throw Error("domain pair: missing member");
  const EnvSpec& a = pair.source->spec();
  const EnvSpec& b = pair.target->spec();
  if (a.state_dim != b.state_dim || a.action_dim != b.action_dim) {
    throw Error("domain pair: state/action dimensions differ between source and target");
  }
  if (a.action_low != b.action_low || a.action_high != b.action_high) {
    throw Error("domain pair: action bounds differ between source and target");
  }
  if (pair.source->domain() != Domain::kSource || pair.target->domain() != Domain::kTarget) {
    throw Error("domain pair: members carry the wrong domain tags");
  }
}

DomainPair make_domain_pair(const std::string& task, const nlohmann::json& cfg) {
  DomainPair pair;
  if (task == "pointmaze") {
    PointMazeConfig src = point_maze_config_from_json(cfg);
    PointMazeConfig tgt = src;
    src.wall_length = cfg.value("source_wall_length", 0.5);
    tgt.wall_length = cfg.value("target_wall_length", 0.75);
    if (!(tgt.wall_length > src.wall_length)) {
      throw Error("pointmaze: target wall must be longer than the source wall");
    }
    pair.source = std::make_shared<PointMaze>(src, Domain::kSource);
    pair.target = std::make_shared<PointMaze>(tgt, Domain::kTarget);
  } else if (task == "linkchain") {
    LinkChainConfig src = link_chain_config_from_json(cfg);
    LinkChainConfig tgt = src;
    src.disabled_mask.assign(static_cast<std::size_t>(src.num_joints), false);
    tgt.disabled_mask.assign(static_cast<std::size_t>(tgt.num_joints), false);
    for (int j : cfg.value("target_disabled_joints", std::vector<int>{0})) {
      if (j < 0 || j >= tgt.num_joints) throw Error("linkchain: disabled joint index out of range");
      tgt.disabled_mask[static_cast<std::size_t>(j)] = true;
    }
    bool any = false;
    for (bool b : tgt.disabled_mask) any = any || b;
    if (!any) throw Error("linkchain: target domain must disable at least one joint");
    pair.source = std::make_shared<LinkChain>(src, Domain::kSource);
    pair.target = std::make_shared<LinkChain>(tgt, Domain::kTarget);
  } else {
    throw Error("unknown task '" + task + "'");
  }
  validate_pair(pair);
  return pair;
}

Trajectory rollout(const PolicyFn& policy, const Environment& env, int horizon, Rng& rng,
                   const RolloutOptions& options) {
  Trajectory traj;
  if (horizon <= 0) return traj;
  traj.reserve(static_cast<std::size_t>(horizon));
  Vec s = env.reset(rng);
  for (int t = 0; t < horizon; ++t) {
    Vec a = policy(s, rng);
    StepResult r = env.step(s, a, rng);
    Transition tr;
    tr.s = s;
    tr.a = std::move(a);
    tr.s_next = r.next_state;
    tr.done = r.done;
    tr.domain = env.domain();
    tr.gt_reward = options.poison_gt_reward ? std::numeric_limits<double>::quiet_NaN()
                                            : env.ground_truth_reward(r.next_state);
    traj.push_back(std::move(tr));
    if (r.done) break;
    s = std::move(r.next_state);
  }
  return traj;
}

std::string trajectory_csv_header(int state_dim, int action_dim) {
  std::string h;
  for (int i = 0; i < state_dim; ++i) h += "s_" + std::to_string(i) + ",";
  for (int i = 0; i < action_dim; ++i) h += "a_" + std::to_string(i) + ",";
  for (int i = 0; i < state_dim; ++i) h += "s_next_" + std::to_string(i) + ",";
  h += "done,domain_tag";
  return h;
}

void write_transition_row(std::ostream& os, const Transition& t) {
  for (Eigen::Index i = 0; i < t.s.size(); ++i) os << csv::format_double(t.s[i]) << ',';
  for (Eigen::Index i = 0; i < t.a.size(); ++i) os << csv::format_double(t.a[i]) << ',';
  for (Eigen::Index i = 0; i < t.s_next.size(); ++i) os << csv::format_double(t.s_next[i]) << ',';
  os << (t.done ? 1 : 0) << ',' << to_string(t.domain) << '\n';
}

void write_trajectories_csv(std::ostream& os, std::span<const Trajectory> trajectories,
                            int state_dim, int action_dim) {
  os << trajectory_csv_header(state_dim, action_dim) << '\n';
  for (const auto& traj : trajectories) {
    for (const auto& t : traj) write_transition_row(os, t);
  }
}

void write_trajectories_csv(const std::string& path, std::span<const Trajectory> trajectories,
                            int state_dim, int action_dim) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  write_trajectories_csv(os, trajectories, state_dim, action_dim);
}

}  // namespace odirl::env
