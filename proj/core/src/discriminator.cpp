#include "odirl/discriminator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "odirl/csv.hpp"

namespace odirl::irl {

void DiscriminatorConfig::validate() const {
  if (!(gamma >= 0 && gamma <= 1)) throw Error("discriminator config: gamma must be in [0, 1]");
  if (!(learning_rate > 0) || batch_size < 1 || steps_per_iteration < 0) {
    throw Error("discriminator config: learning_rate and batch_size must be positive");
  }
  if (!(logit_clamp > 0)) throw Error("discriminator config: logit_clamp must be positive");
}

DiscriminatorConfig discriminator_config_from_json(const nlohmann::json& j, DiscriminatorConfig c) {
  c.state_only = j.value("state_only", c.state_only);
  c.hidden = j.value("hidden", c.hidden);
  c.gamma = j.value("gamma", c.gamma);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.steps_per_iteration = j.value("steps_per_iteration", c.steps_per_iteration);
  c.logit_clamp = j.value("logit_clamp", c.logit_clamp);
  c.validate();
  return c;
}

nlohmann::json to_json(const DiscriminatorConfig& c) {
  return {{"state_only", c.state_only},   {"hidden", c.hidden},
          {"gamma", c.gamma},             {"learning_rate", c.learning_rate},
          {"batch_size", c.batch_size},   {"steps_per_iteration", c.steps_per_iteration},
          {"logit_clamp", c.logit_clamp}};
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double policy_reward(double f_val, double log_pi, bool flip_sign, double clamp) {
  const double logit = std::clamp(disc_logit(f_val, log_pi, 0.0), -clamp, clamp);
  return flip_sign ? -logit : logit;
}

AirlDiscriminator::AirlDiscriminator(approx::Mlp g_net, approx::Mlp h_net, double gamma, bool state_only)
    : g_(std::move(g_net)), h_(std::move(h_net)), gamma_(gamma), state_only_(state_only) {
  if (g_.out_dim() != 1 || h_.out_dim() != 1) throw Error("discriminator: g and h must be scalar");
  if (!(gamma_ >= 0 && gamma_ <= 1)) throw Error("discriminator: gamma must be in [0, 1]");
}

AirlDiscriminator AirlDiscriminator::make(int state_dim, int action_dim, const DiscriminatorConfig& config,
                                          std::uint64_t seed) {
  using approx::Activation;
  const int g_in = config.state_only ? state_dim : state_dim + action_dim;
  auto g = approx::Mlp::make(g_in, config.hidden, 1, Activation::kTanh, Activation::kIdentity, seed);
  auto h = approx::Mlp::make(state_dim, config.hidden, 1, Activation::kTanh, Activation::kIdentity, seed + 1);
  return AirlDiscriminator(std::move(g), std::move(h), config.gamma, config.state_only);
}

Mat AirlDiscriminator::g_input(const Mat& s, const Mat& a) const {
  if (state_only_) return s;
  return vstack({&s, &a});
}

Vec AirlDiscriminator::g_values(const Mat& states, const Mat& actions) const {
  return g_.predict(g_input(states, actions)).row(0).transpose();
}

Vec AirlDiscriminator::h_values(const Mat& states) const { return h_.predict(states).row(0).transpose(); }

Vec AirlDiscriminator::f_values(const TransitionBatch& b) const {
  const Vec g = g_values(b.s, b.a);
  const Vec h = h_values(b.s);
  const Vec h_next = h_values(b.s_next);
  return g + gamma_ * h_next - h;
}

double AirlDiscriminator::f_value(const Vec& s, const Vec& a, const Vec& s_next) const {
  TransitionBatch b;
  b.s = s;
  b.a = a;
  b.s_next = s_next;
  b.done = {0};
  return f_values(b)[0];
}

Vec AirlDiscriminator::forward_f(const TransitionBatch& b) {
  const Eigen::Index n = b.size();
  const Vec g = g_.forward(g_input(b.s, b.a)).row(0).transpose();
  Mat both(b.s.rows(), 2 * n);
  both << b.s, b.s_next;
  const Mat& h = h_.forward(both);
  return g + gamma_ * h.block(0, n, 1, n).transpose() - h.block(0, 0, 1, n).transpose();
}

void AirlDiscriminator::backward_f(const Vec& df) {
  const Eigen::Index n = df.size();
  g_.backward(df.transpose());
  Mat dh(1, 2 * n);
  dh.block(0, 0, 1, n) = -df.transpose();
  dh.block(0, n, 1, n) = gamma_ * df.transpose();
  h_.backward(dh);
}

DiscLoss AirlDiscriminator::disc_loss(const TransitionBatch& demo, const Vec& demo_log_pi,
                                      const Vec& demo_dd, const TransitionBatch& policy,
                                      const Vec& policy_log_pi, double logit_clamp) {
  const Eigen::Index ne = demo.size();
  const Eigen::Index np = policy.size();
  if (ne == 0 || np == 0) throw Error("disc_loss: empty batch");
  if (demo_log_pi.size() != ne || demo_dd.size() != ne || policy_log_pi.size() != np) {
    throw Error("disc_loss: log_pi/dd length does not match the batch");
  }
  // One pass over demos and policy samples so the caches cover both.
  TransitionBatch all;
  all.s.resize(demo.s.rows(), ne + np);
  all.s << demo.s, policy.s;
  all.a.resize(demo.a.rows(), ne + np);
  all.a << demo.a, policy.a;
  all.s_next.resize(demo.s.rows(), ne + np);
  all.s_next << demo.s_next, policy.s_next;
  const Vec f = forward_f(all);

  DiscLoss out;
  Vec df(ne + np);
  for (Eigen::Index i = 0; i < ne; ++i) {
    const double z = std::clamp(disc_logit(f[i], demo_log_pi[i], demo_dd[i]), -logit_clamp, logit_clamp);
    out.loss += softplus(-z) / static_cast<double>(ne);
    df[i] = -sigmoid(-z) / static_cast<double>(ne);
    out.demo_accuracy += z > 0 ? 1.0 : 0.0;
  }
  for (Eigen::Index i = 0; i < np; ++i) {
    const double z = std::clamp(disc_logit(f[ne + i], policy_log_pi[i], 0.0), -logit_clamp, logit_clamp);
    out.loss += softplus(z) / static_cast<double>(np);
    df[ne + i] = sigmoid(z) / static_cast<double>(np);
    out.policy_accuracy += z < 0 ? 1.0 : 0.0;
  }
  out.demo_accuracy /= static_cast<double>(ne);
  out.policy_accuracy /= static_cast<double>(np);
  backward_f(df);
  return out;
}

AirlTrainer::AirlTrainer(AirlDiscriminator disc, DiscriminatorConfig config)
    : disc_(std::move(disc)),
      config_(std::move(config)),
      g_opt_(disc_.g_net().num_params(), {config_.learning_rate}),
      h_opt_(disc_.h_net().num_params(), {config_.learning_rate}) {
  config_.validate();
}

DiscLoss AirlTrainer::update(const TransitionBatch& demo, const Vec& demo_log_pi, const Vec& demo_dd,
                             const TransitionBatch& policy, const Vec& policy_log_pi) {
  DiscLoss l = disc_.disc_loss(demo, demo_log_pi, demo_dd, policy, policy_log_pi, config_.logit_clamp);
  g_opt_.step(disc_.g_net());
  h_opt_.step(disc_.h_net());
  return l;
}

std::vector<HeatmapCell> reward_heatmap(const AirlDiscriminator& disc, const GridSpec& grid) {
  if (!disc.state_only()) throw Error("reward_heatmap: g is state-action parametrized; heatmap undefined");
  if (disc.g_net().in_dim() != 2) throw Error("reward_heatmap: requires a 2-D state space");
  if (grid.nx < 1 || grid.ny < 1) throw Error("reward_heatmap: grid must have at least one cell");
  Mat pts(2, grid.nx * grid.ny);
  const double dx = (grid.x1 - grid.x0) / grid.nx;
  const double dy = (grid.y1 - grid.y0) / grid.ny;
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      pts(0, j * grid.nx + i) = grid.x0 + (i + 0.5) * dx;
      pts(1, j * grid.nx + i) = grid.y0 + (j + 0.5) * dy;
    }
  }
  const Mat g = disc.g_net().predict(pts);
  std::vector<HeatmapCell> cells;
  cells.reserve(static_cast<std::size_t>(pts.cols()));
  for (Eigen::Index k = 0; k < pts.cols(); ++k) cells.push_back({pts(0, k), pts(1, k), g(0, k)});
  return cells;
}

void write_heatmap_csv(std::ostream& os, const std::vector<HeatmapCell>& cells) {
  os << "x,y,value\n";
  for (const auto& c : cells) {
    os << csv::format_double(c.x) << ',' << csv::format_double(c.y) << ',' << csv::format_double(c.value)
       << '\n';
  }
}

void write_heatmap_csv(const std::string& path, const std::vector<HeatmapCell>& cells) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open '" + path + "' for writing");
  write_heatmap_csv(os, cells);
}

}  // namespace odirl::irl
