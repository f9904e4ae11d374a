#pragma once

#include <functional>
#include <limits>
#include <span>

#include <nlohmann/json.hpp>

#include "odirl/gaussian_policy.hpp"

namespace odirl::policy {

struct PolicyOptConfig {
  double entropy_coef = 0.0;  // lambda
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double clip_ratio = 0.2;  // +inf disables clipping
  int epochs = 10;
  int minibatch_size = 64;
  double policy_lr = 3e-4;
  double value_lr = 1e-3;
  double max_grad_norm = 0.5;  // <= 0 disables
  bool normalize_advantages = true;

  void validate() const;
};

PolicyOptConfig policy_opt_config_from_json(const nlohmann::json& j, PolicyOptConfig base = {});
nlohmann::json to_json(const PolicyOptConfig& c);

// Maps a batch of (s, a, s') to one reward per column.
using RewardFn = std::function<Vec(const TransitionBatch&)>;

// d/d(ratio) of min(ratio * A, clip(ratio, 1 - eps, 1 + eps) * A).
double clipped_surrogate_grad(double ratio, double advantage, double clip_ratio);

struct UpdateStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double mean_reward = 0.0;
  double approx_kl = 0.0;
};

// Generalized advantage estimates per trajectory. Time-limit truncation
// bootstraps from V(s'), termination (done) does not.
struct Advantages {
  Vec advantages;
  Vec returns;
};
Advantages compute_gae(std::span<const Trajectory> batch, const Vec& rewards, const Vec& values,
                       const Vec& next_values, double gamma, double gae_lambda);

// Clipped-ratio policy gradient with an entropy bonus, plus value regression.
// Owns the policy, the value baseline and their optimizer states.
class MaxEntTrainer {
 public:
  MaxEntTrainer(GaussianPolicy policy, ValueNet value, PolicyOptConfig config);

  UpdateStats maxent_update(std::span<const Trajectory> batch, const RewardFn& reward_fn, Rng& rng);

  GaussianPolicy& policy() { return policy_; }
  const GaussianPolicy& policy() const { return policy_; }
  ValueNet& value() { return value_; }
  const ValueNet& value() const { return value_; }
  const PolicyOptConfig& config() const { return config_; }
  PolicyOptConfig& mutable_config() { return config_; }

 private:
  GaussianPolicy policy_;
  ValueNet value_;
  PolicyOptConfig config_;
  approx::Adam mean_opt_;
  approx::Adam log_std_opt_;
  approx::Adam value_opt_;
};

}  // namespace odirl::policy
