#include "odirl/link_chain.hpp"

#include <algorithm>
#include <cmath>

namespace odirl::env {

void LinkChainConfig::validate() const {
  if (num_joints < 1) throw Error("linkchain: num_joints must be positive");
  if (!disabled_mask.empty() && static_cast<int>(disabled_mask.size()) != num_joints) {
    throw Error("linkchain: disabled_mask length must equal num_joints");
  }
  if (!(torque_limit > 0) || !(dt > 0) || !(damping >= 0) || !(max_velocity > 0)) {
    throw Error("linkchain: torque_limit, dt, max_velocity must be positive, damping non-negative");
  }
  if (goal.size() != 2 || !goal.allFinite()) throw Error("linkchain: goal must be a finite 2-vector");
  if (horizon < 1) throw Error("linkchain: horizon must be >= 1");
}

LinkChainConfig link_chain_config_from_json(const nlohmann::json& j) {
  LinkChainConfig c;
  c.num_joints = j.value("num_joints", c.num_joints);
  c.torque_limit = j.value("torque_limit", c.torque_limit);
  c.dt = j.value("dt", c.dt);
  c.damping = j.value("damping", c.damping);
  c.max_velocity = j.value("max_velocity", c.max_velocity);
  c.init_angle_range = j.value("init_angle_range", c.init_angle_range);
  c.init_velocity_range = j.value("init_velocity_range", c.init_velocity_range);
  c.noise_std = j.value("noise_std", c.noise_std);
  auto g = j.value("goal", std::vector<double>{0.3, 0.6});
  if (g.size() != 2) throw Error("linkchain: goal must have two coordinates");
  c.goal = Eigen::Map<const Vec>(g.data(), 2);
  c.goal_radius = j.value("goal_radius", c.goal_radius);
  c.horizon = j.value("horizon", c.horizon);
  const std::string reward = j.value("gt_reward", std::string("distance"));
  if (reward == "distance") {
    c.reward = ChainReward::kDistance;
  } else if (reward == "forward_velocity") {
    c.reward = ChainReward::kForwardVelocity;
  } else {
    throw Error("linkchain: gt_reward must be 'distance' or 'forward_velocity'");
  }
  return c;
}

nlohmann::json to_json(const LinkChainConfig& c) {
  std::vector<int> mask(c.disabled_mask.begin(), c.disabled_mask.end());
  return {{"num_joints", c.num_joints},
          {"torque_limit", c.torque_limit},
          {"disabled_mask", mask},
          {"dt", c.dt},
          {"damping", c.damping},
          {"max_velocity", c.max_velocity},
          {"init_angle_range", c.init_angle_range},
          {"init_velocity_range", c.init_velocity_range},
          {"noise_std", c.noise_std},
          {"goal", {c.goal[0], c.goal[1]}},
          {"goal_radius", c.goal_radius},
          {"horizon", c.horizon},
          {"gt_reward", c.reward == ChainReward::kDistance ? "distance" : "forward_velocity"}};
}

LinkChain::LinkChain(LinkChainConfig config, Domain domain)
    : config_(std::move(config)), domain_(domain) {
  config_.validate();
  const int n = config_.num_joints;
  spec_.state_dim = 2 * n;
  spec_.action_dim = n;
  spec_.action_low = Vec::Constant(n, -1.0);
  spec_.action_high = Vec::Constant(n, 1.0);
  spec_.horizon = config_.horizon;
  spec_.goal = config_.goal;
  spec_.goal_radius = config_.goal_radius;
}

Vec LinkChain::reset(Rng& rng) const {
  const int n = config_.num_joints;
  std::uniform_real_distribution<double> uq(-config_.init_angle_range, config_.init_angle_range);
  std::uniform_real_distribution<double> uv(-config_.init_velocity_range,
                                            config_.init_velocity_range);
  Vec s(2 * n);
  for (int i = 0; i < n; ++i) s[i] = config_.init_angle_range > 0 ? uq(rng) : 0.0;
  for (int i = 0; i < n; ++i) s[n + i] = config_.init_velocity_range > 0 ? uv(rng) : 0.0;
  return s;
}

StepResult LinkChain::step(const Vec& state, const Vec& action, Rng& rng) const {
  const int n = config_.num_joints;
  if (state.size() != 2 * n) throw Error("linkchain: state dimension mismatch");
  if (!state.allFinite()) throw Error("linkchain: simulator diverged (non-finite state)");
  Vec u = clip_action(action);
  for (int j = 0; j < n; ++j) {
    if (config_.disabled(j)) u[j] = 0.0;
  }
  StepResult r;
  r.next_state = Vec(2 * n);
  std::normal_distribution<double> noise(0.0, config_.noise_std > 0 ? config_.noise_std : 1.0);
  for (int j = 0; j < n; ++j) {
    const double q = state[j];
    const double qd = state[n + j];
    double acc = config_.torque_limit * u[j] - config_.damping * qd;
    if (config_.noise_std > 0) acc += noise(rng);
    const double qd_next = std::clamp(qd + config_.dt * acc, -config_.max_velocity, config_.max_velocity);
    r.next_state[j] = q + config_.dt * qd_next;
    r.next_state[n + j] = qd_next;
  }
  r.done = false;
  return r;
}

Vec LinkChain::position(const Vec& state) const {
  const int n = config_.num_joints;
  const double l = config_.link_length();
  Vec p = Vec::Zero(2);
  double theta = 0.0;
  for (int j = 0; j < n; ++j) {
    theta += state[j];
    p[0] += l * std::cos(theta);
    p[1] += l * std::sin(theta);
  }
  return p;
}

double LinkChain::tip_forward_velocity(const Vec& state) const {
  const int n = config_.num_joints;
  const double l = config_.link_length();
  double theta = 0.0;
  double omega = 0.0;
  double vx = 0.0;
  for (int j = 0; j < n; ++j) {
    theta += state[j];
    omega += state[n + j];
    vx -= l * std::sin(theta) * omega;
  }
  return vx;
}

double LinkChain::ground_truth_reward(const Vec& state) const {
  if (config_.reward == ChainReward::kForwardVelocity) return tip_forward_velocity(state);
  return Environment::ground_truth_reward(state);
}

nlohmann::json LinkChain::config_json() const {
  auto j = to_json(config_);
  j["task"] = "linkchain";
  j["domain"] = std::string(to_string(domain_));
  return j;
}

}  // namespace odirl::env
