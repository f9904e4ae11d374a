#include "odirl/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace odirl::policy {

void PolicyOptConfig::validate() const {
  if (!(entropy_coef >= 0)) throw Error("policy config: entropy_coef must be >= 0");
  if (!(gamma >= 0 && gamma < 1)) throw Error("policy config: gamma must be in [0, 1)");
  if (!(gae_lambda >= 0 && gae_lambda <= 1)) throw Error("policy config: gae_lambda must be in [0, 1]");
  if (!(clip_ratio > 0)) throw Error("policy config: clip_ratio must be positive");
  if (epochs < 1 || minibatch_size < 1) throw Error("policy config: epochs and minibatch_size must be >= 1");
  if (!(policy_lr > 0) || !(value_lr > 0)) throw Error("policy config: learning rates must be positive");
}

PolicyOptConfig policy_opt_config_from_json(const nlohmann::json& j, PolicyOptConfig c) {
  c.entropy_coef = j.value("entropy_coef", c.entropy_coef);
  c.gamma = j.value("gamma", c.gamma);
  c.gae_lambda = j.value("gae_lambda", c.gae_lambda);
  c.clip_ratio = j.value("clip_ratio", c.clip_ratio);
  c.epochs = j.value("epochs", c.epochs);
  c.minibatch_size = j.value("minibatch_size", c.minibatch_size);
  c.policy_lr = j.value("policy_lr", c.policy_lr);
  c.value_lr = j.value("value_lr", c.value_lr);
  c.max_grad_norm = j.value("max_grad_norm", c.max_grad_norm);
  c.normalize_advantages = j.value("normalize_advantages", c.normalize_advantages);
  c.validate();
  return c;
}

nlohmann::json to_json(const PolicyOptConfig& c) {
  return {{"entropy_coef", c.entropy_coef}, {"gamma", c.gamma},
          {"gae_lambda", c.gae_lambda},     {"clip_ratio", c.clip_ratio},
          {"epochs", c.epochs},             {"minibatch_size", c.minibatch_size},
          {"policy_lr", c.policy_lr},       {"value_lr", c.value_lr},
          {"max_grad_norm", c.max_grad_norm}, {"normalize_advantages", c.normalize_advantages}};
}

double clipped_surrogate_grad(double ratio, double advantage, double clip_ratio) {
  if (advantage >= 0.0) return ratio < 1.0 + clip_ratio ? advantage : 0.0;
  return ratio > 1.0 - clip_ratio ? advantage : 0.0;
}

Advantages compute_gae(std::span<const Trajectory> batch, const Vec& rewards, const Vec& values,
                       const Vec& next_values, double gamma, double gae_lambda) {
  const Eigen::Index n = rewards.size();
  Advantages out{Vec::Zero(n), Vec::Zero(n)};
  Eigen::Index end = 0;
  for (const auto& traj : batch) {
    const Eigen::Index begin = end;
    end += static_cast<Eigen::Index>(traj.size());
    double next_adv = 0.0;
    for (Eigen::Index i = end; i-- > begin;) {
      const bool done = traj[static_cast<std::size_t>(i - begin)].done;
      const double bootstrap = done ? 0.0 : gamma * next_values[i];
      const double delta = rewards[i] + bootstrap - values[i];
      // The last transition of a trajectory has no successor in the batch.
      const double carry = (done || i == end - 1) ? 0.0 : gamma * gae_lambda * next_adv;
      out.advantages[i] = delta + carry;
      next_adv = out.advantages[i];
    }
  }
  out.returns = out.advantages + values;
  return out;
}

MaxEntTrainer::MaxEntTrainer(GaussianPolicy policy, ValueNet value, PolicyOptConfig config)
    : policy_(std::move(policy)), value_(std::move(value)), config_(config) {
  config_.validate();
  if (value_.net.in_dim() != policy_.state_dim()) throw Error("trainer: value/policy state dims differ");
  const double clip = config_.max_grad_norm > 0 ? config_.max_grad_norm : 0.0;
  mean_opt_ = approx::Adam(policy_.mean_net().num_params(), {config_.policy_lr, 0.9, 0.999, 1e-8, clip});
  log_std_opt_ = approx::Adam(static_cast<std::size_t>(policy_.action_dim()),
                              {config_.policy_lr, 0.9, 0.999, 1e-8, 0.0});
  value_opt_ = approx::Adam(value_.net.num_params(), {config_.value_lr, 0.9, 0.999, 1e-8, clip});
}

UpdateStats MaxEntTrainer::maxent_update(std::span<const Trajectory> batch, const RewardFn& reward_fn,
                                         Rng& rng) {
  const TransitionBatch data = stack(batch);
  const Eigen::Index n = data.size();
  if (n == 0) throw Error("maxent_update: empty batch");

  const Vec rewards = reward_fn(data);
  if (rewards.size() != n) throw Error("maxent_update: reward_fn returned the wrong number of rewards");
  if (!rewards.allFinite()) throw Error("maxent_update: non-finite reward");

  const Vec values = value_.predict(data.s);
  const Vec next_values = value_.predict(data.s_next);
  Advantages adv = compute_gae(batch, rewards, values, next_values, config_.gamma, config_.gae_lambda);
  Vec a_norm = adv.advantages;
  if (config_.normalize_advantages) {
    const double mean = a_norm.mean();
    const double var = n > 1 ? (a_norm.array() - mean).square().sum() / static_cast<double>(n) : 0.0;
    a_norm = (a_norm.array() - mean) / (std::sqrt(var) + 1e-8);
  }
  // The tanh Jacobian does not depend on the parameters, so the ratio and its
  // gradient are computed on the pre-squash Gaussian.
  const Mat pre_squash = GaussianPolicy::unsquash(data.a);
  const Vec logp_old = policy_.gaussian_log_prob(data.s, pre_squash);

  UpdateStats stats;
  stats.mean_reward = rewards.mean();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const int da = policy_.action_dim();
  const Eigen::Index mb = std::min<Eigen::Index>(config_.minibatch_size, n);
  int updates = 0;

  for (int epoch = 0; epoch < config_.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (Eigen::Index start = 0; start < n; start += mb) {
      const Eigen::Index m = std::min(mb, n - start);
      Mat s(data.s.rows(), m), a(da, m);
      Vec ad(m), lp_old(m), ret(m);
      for (Eigen::Index k = 0; k < m; ++k) {
        const Eigen::Index i = order[static_cast<std::size_t>(start + k)];
        s.col(k) = data.s.col(i);
        a.col(k) = pre_squash.col(i);
        ad[k] = a_norm[i];
        lp_old[k] = logp_old[i];
        ret[k] = adv.returns[i];
      }

      // Policy: loss = -mean(clipped surrogate) - lambda * H.
      const Mat mu = kMeanScale * policy_.mean_net().forward(s);
      const Vec log_std = policy_.log_std();
      const Vec inv_var = (-2.0 * log_std).array().exp();
      const Mat diff = a - mu;
      const Mat z2 = diff.array().square().colwise() * inv_var.array();
      const double norm = log_std.sum() + 0.91893853320467274178 * da;
      Mat d_mu(da, m);
      Vec d_log_std = Vec::Zero(da);
      double surr = 0.0;
      double kl = 0.0;
      for (Eigen::Index k = 0; k < m; ++k) {
        const double lp = -0.5 * z2.col(k).sum() - norm;
        // Clamped so a stale sample cannot overflow the ratio.
        const double ratio = std::exp(std::min(lp - lp_old[k], 20.0));
        surr += std::min(ratio * ad[k], std::clamp(ratio, 1.0 - config_.clip_ratio, 1.0 + config_.clip_ratio) * ad[k]);
        kl += lp_old[k] - lp;
        // dL/dlogp for this sample
        const double g = -ratio * clipped_surrogate_grad(ratio, ad[k], config_.clip_ratio) / static_cast<double>(m);
        d_mu.col(k) = g * diff.col(k).cwiseProduct(inv_var);
        d_log_std += g * (z2.col(k).array() - 1.0).matrix();
      }
      d_log_std.array() -= config_.entropy_coef;
      policy_.mean_net().backward(kMeanScale * d_mu);
      mean_opt_.step(policy_.mean_net());
      Vec ls = policy_.log_std();
      log_std_opt_.step(std::span<double>(ls.data(), static_cast<std::size_t>(da)),
                        std::span<double>(d_log_std.data(), static_cast<std::size_t>(da)));
      policy_.set_log_std(ls);

      // Value regression onto GAE returns.
      const Mat& v = value_.net.forward(s);
      const Mat err = v - ret.transpose();
      value_.net.backward(2.0 * err / static_cast<double>(m));
      value_opt_.step(value_.net);

      stats.policy_loss += -surr / static_cast<double>(m) - config_.entropy_coef * policy_.entropy();
      stats.value_loss += err.squaredNorm() / static_cast<double>(m);
      stats.approx_kl += kl / static_cast<double>(m);
      ++updates;
    }
  }
  if (updates > 0) {
    stats.policy_loss /= updates;
    stats.value_loss /= updates;
    stats.approx_kl /= updates;
  }
  stats.entropy = policy_.entropy();
  return stats;
}

}  // namespace odirl::policy
