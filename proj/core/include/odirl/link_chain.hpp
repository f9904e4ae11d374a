#pragma once

#include "odirl/env.hpp"

namespace odirl::env {

enum class ChainReward { kDistance, kForwardVelocity };

// Planar chain of torque-driven revolute joints with viscous damping.
// State is (q_1..q_N, qdot_1..qdot_N); the task-space point is the tip.
struct LinkChainConfig {
  int num_joints = 3;
  double torque_limit = 2.0;
  std::vector<bool> disabled_mask;  // empty means all enabled
  double dt = 0.1;
  double damping = 1.0;
  double max_velocity = 10.0;
  double init_angle_range = 0.1;
  double init_velocity_range = 0.0;
  double noise_std = 0.0;
  Vec goal = Vec::Zero(2);
  double goal_radius = 0.1;
  int horizon = 50;
  ChainReward reward = ChainReward::kDistance;

  double link_length() const { return 1.0 / num_joints; }
  bool disabled(int j) const { return !disabled_mask.empty() && disabled_mask[static_cast<std::size_t>(j)]; }
  void validate() const;
};

LinkChainConfig link_chain_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const LinkChainConfig& c);

class LinkChain final : public Environment {
 public:
  LinkChain(LinkChainConfig config, Domain domain);

  const EnvSpec& spec() const override { return spec_; }
  Domain domain() const override { return domain_; }
  std::string task_name() const override { return "linkchain"; }
  Vec reset(Rng& rng) const override;
  StepResult step(const Vec& state, const Vec& action, Rng& rng) const override;
  Vec position(const Vec& state) const override;
  double ground_truth_reward(const Vec& state) const override;
  nlohmann::json config_json() const override;

  const LinkChainConfig& config() const { return config_; }
  // Horizontal tip velocity (the "run forward" ground truth).
  double tip_forward_velocity(const Vec& state) const;

 private:
  LinkChainConfig config_;
  Domain domain_;
  EnvSpec spec_;
};

}  // namespace odirl::env
