#pragma once

#include <string>
#include <vector>

#include "odirl/env.hpp"
#include "odirl/mlp.hpp"

namespace odirl::policy {

inline constexpr double kMinLogStd = -5.0;
inline constexpr double kMaxLogStd = 2.0;
// The pre-squash mean is kMeanScale * tanh(net output).
inline constexpr double kMeanScale = 2.0;

struct ActionSample {
  Vec action;  // tanh(pre_squash), inside the action box
  Vec pre_squash;  // Gaussian sample
  double log_prob = 0.0;  // density of `action`
};

// a = tanh(u), u ~ N(mu(s), diag(exp(2 log_std))). The mean is state-dependent,
// the log standard deviation is not. Densities are over a and include the
// change-of-variables term, so the entropy bonus stays bounded on the box.
class GaussianPolicy {
 public:
  GaussianPolicy() = default;
  GaussianPolicy(approx::Mlp mean_net, Vec log_std, Vec action_low, Vec action_high);

  static GaussianPolicy make(const env::EnvSpec& spec, const std::vector<int>& hidden,
                             std::uint64_t seed, double init_log_std = 0.0);

  int state_dim() const { return mean_net_.in_dim(); }
  int action_dim() const { return mean_net_.out_dim(); }

  ActionSample sample_action(const Vec& state, Rng& rng) const;
  // tanh(mu(s)), used for deterministic evaluation.
  Vec mean_action(const Vec& state) const;
  double log_prob(const Vec& state, const Vec& action) const;
  // One log-density per column.
  Vec log_prob(const Mat& states, const Mat& actions) const;
  // Pre-squash mean, one column per state.
  Mat mean(const Mat& states) const;
  // Gaussian log-density of pre-squash samples (no tanh correction).
  Vec gaussian_log_prob(const Mat& states, const Mat& pre_squash) const;
  // atanh of actions pulled just inside (-1, 1).
  static Mat unsquash(const Mat& actions);
  // Entropy of the pre-squash Gaussian.
  double entropy() const;

  approx::Mlp& mean_net() { return mean_net_; }
  const approx::Mlp& mean_net() const { return mean_net_; }
  const Vec& log_std() const { return log_std_; }
  // Values are clamped to [kMinLogStd, kMaxLogStd].
  void set_log_std(const Vec& log_std);
  Vec& mutable_log_std() { return log_std_; }
  void clamp_log_std();
  const Vec& action_low() const { return low_; }
  const Vec& action_high() const { return high_; }

  // Squashed samples, as stored in transitions.
  env::PolicyFn stochastic() const;
  env::PolicyFn deterministic() const;

  void save(const std::string& path) const;
  static GaussianPolicy load(const std::string& path, const env::EnvSpec& spec);

 private:
  approx::Mlp mean_net_;
  Vec log_std_;
  Vec low_;
  Vec high_;
};

struct ValueNet {
  approx::Mlp net;

  static ValueNet make(int state_dim, const std::vector<int>& hidden, std::uint64_t seed);
  Vec predict(const Mat& states) const { return net.predict(states).row(0).transpose(); }
};

struct EvalResult {
  double mean_return = 0.0;
  double success_rate = 0.0;
  std::vector<Trajectory> trajectories;
};

// Deterministic (mean-action) rollouts; returns the mean cumulative
// ground-truth reward and the fraction of episodes ending in the goal region.
EvalResult evaluate(const GaussianPolicy& policy, const env::Environment& env, int n_episodes,
                    Rng& rng, bool keep_trajectories = false);
EvalResult evaluate(const env::PolicyFn& policy, const env::Environment& env, int n_episodes,
                    Rng& rng, bool keep_trajectories = false);

}  // namespace odirl::policy
