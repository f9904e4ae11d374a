#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "odirl/mlp.hpp"

namespace odirl::irl {

struct DiscriminatorConfig {
  bool state_only = true;  // g(s) instead of g(s, a)
  std::vector<int> hidden{64, 64};
  double gamma = 0.99;
  double learning_rate = 3e-4;
  int batch_size = 256;  // per class
  int steps_per_iteration = 1;
  double logit_clamp = 10.0;

  void validate() const;
};

DiscriminatorConfig discriminator_config_from_json(const nlohmann::json& j,
                                                   DiscriminatorConfig base = {});
nlohmann::json to_json(const DiscriminatorConfig& c);

double sigmoid(double z);
// log(1 + e^z) without overflow.
double softplus(double z);

// (f + dd) - log_pi. sigmoid of it is D' (or D when dd = 0).
inline double disc_logit(double f_val, double log_pi, double dd_val) {
  return (f_val + dd_val) - log_pi;
}

// log D - log(1 - D) = f - log_pi, clamped to +-clamp. `flip_sign` gives the
// log(1 - D) - log D variant.
double policy_reward(double f_val, double log_pi, bool flip_sign = false, double clamp = 10.0);

struct DiscLoss {
  double loss = 0.0;
  double demo_accuracy = 0.0;
  double policy_accuracy = 0.0;
};

// f(s, a, s') = g(s[, a]) + gamma * h(s') - h(s).
class AirlDiscriminator {
 public:
  AirlDiscriminator() = default;
  AirlDiscriminator(approx::Mlp g_net, approx::Mlp h_net, double gamma, bool state_only);

  static AirlDiscriminator make(int state_dim, int action_dim, const DiscriminatorConfig& config,
                                std::uint64_t seed);

  double f_value(const Vec& s, const Vec& a, const Vec& s_next) const;
  Vec f_values(const TransitionBatch& batch) const;
  Vec g_values(const Mat& states, const Mat& actions) const;
  Vec h_values(const Mat& states) const;

  // Binary logistic loss: demos use logit (f + dd) - log_pi, policy samples
  // use f - log_pi. Gradients flow into g and h only; `demo_dd` is a constant.
  // Logits are clamped to +-logit_clamp with a straight-through gradient.
  DiscLoss disc_loss(const TransitionBatch& demo, const Vec& demo_log_pi, const Vec& demo_dd,
                     const TransitionBatch& policy, const Vec& policy_log_pi,
                     double logit_clamp = 10.0);

  approx::Mlp& g_net() { return g_; }
  const approx::Mlp& g_net() const { return g_; }
  approx::Mlp& h_net() { return h_; }
  const approx::Mlp& h_net() const { return h_; }
  double gamma() const { return gamma_; }
  bool state_only() const { return state_only_; }

 private:
  Mat g_input(const Mat& s, const Mat& a) const;
  // f for a batch with caches primed for backward_f().
  Vec forward_f(const TransitionBatch& batch);
  void backward_f(const Vec& df);

  approx::Mlp g_;
  approx::Mlp h_;
  double gamma_ = 0.99;
  bool state_only_ = true;
};

class AirlTrainer {
 public:
  AirlTrainer(AirlDiscriminator disc, DiscriminatorConfig config);

  DiscLoss update(const TransitionBatch& demo, const Vec& demo_log_pi, const Vec& demo_dd,
                  const TransitionBatch& policy, const Vec& policy_log_pi);

  AirlDiscriminator& disc() { return disc_; }
  const AirlDiscriminator& disc() const { return disc_; }
  const DiscriminatorConfig& config() const { return config_; }

 private:
  AirlDiscriminator disc_;
  DiscriminatorConfig config_;
  approx::Adam g_opt_;
  approx::Adam h_opt_;
};

// GAIL baseline: D(s, a) = sigmoid(d(s, a)).
class GailDiscriminator {
 public:
  GailDiscriminator() = default;
  explicit GailDiscriminator(approx::Mlp d_net) : d_(std::move(d_net)) {}
  static GailDiscriminator make(int state_dim, int action_dim, const std::vector<int>& hidden,
                                std::uint64_t seed);

  Vec logits(const TransitionBatch& batch) const;
  DiscLoss gail_disc_loss(const TransitionBatch& demo, const TransitionBatch& policy,
                          double logit_clamp = 10.0);
  // -log(1 - D(s, a)) with the logit clamped to +-clamp.
  Vec gail_policy_reward(const TransitionBatch& batch, double logit_clamp = 10.0) const;

  approx::Mlp& d_net() { return d_; }
  const approx::Mlp& d_net() const { return d_; }

 private:
  approx::Mlp d_;
};

class GailTrainer {
 public:
  GailTrainer(GailDiscriminator disc, DiscriminatorConfig config);
  DiscLoss update(const TransitionBatch& demo, const TransitionBatch& policy);
  GailDiscriminator& disc() { return disc_; }
  const GailDiscriminator& disc() const { return disc_; }

 private:
  GailDiscriminator disc_;
  DiscriminatorConfig config_;
  approx::Adam opt_;
};

struct GridSpec {
  int nx = 50;
  int ny = 50;
  double x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
};

struct HeatmapCell {
  double x;
  double y;
  double value;
};

// g(s) at every cell center; requires a state-only g over 2-D states.
std::vector<HeatmapCell> reward_heatmap(const AirlDiscriminator& disc, const GridSpec& grid);
void write_heatmap_csv(std::ostream& os, const std::vector<HeatmapCell>& cells);
void write_heatmap_csv(const std::string& path, const std::vector<HeatmapCell>& cells);

}  // namespace odirl::irl
