#include "odirl/gaussian_policy.hpp"

#include <cmath>
#include <numbers>

namespace odirl::policy {

namespace {
constexpr double kHalfLog2Pi = 0.91893853320467274178;  // 0.5 * log(2*pi)
constexpr double kActionEdge = 1.0 - 1e-12;

// log(1 - tanh(u)^2), stable for large |u|.
double log_tanh_jacobian(double u) {
  const double x = -2.0 * std::abs(u);
  return 2.0 * (std::numbers::ln2 - std::abs(u) - std::log1p(std::exp(x)));
}
}  // namespace

GaussianPolicy::GaussianPolicy(approx::Mlp mean_net, Vec log_std, Vec action_low, Vec action_high)
    : mean_net_(std::move(mean_net)),
      log_std_(std::move(log_std)),
      low_(std::move(action_low)),
      high_(std::move(action_high)) {
  if (log_std_.size() != mean_net_.out_dim() || low_.size() != log_std_.size() ||
      high_.size() != log_std_.size()) {
    throw Error("policy: action dimension mismatch between mean net, log_std and bounds");
  }
  if (!low_.allFinite() || !high_.allFinite()) throw Error("policy: action bounds must be finite");
  clamp_log_std();
}

GaussianPolicy GaussianPolicy::make(const env::EnvSpec& spec, const std::vector<int>& hidden,
                                    std::uint64_t seed, double init_log_std) {
  // Squashing targets the unit action box.
  if ((spec.action_low.array() != -1.0).any() || (spec.action_high.array() != 1.0).any()) {
    throw Error("policy: expected a [-1, 1] action box");
  }
  auto net = approx::Mlp::make(spec.state_dim, hidden, spec.action_dim, approx::Activation::kTanh,
                               approx::Activation::kTanh, seed, 0.01);
  return GaussianPolicy(std::move(net), Vec::Constant(spec.action_dim, init_log_std),
                        spec.action_low, spec.action_high);
}

void GaussianPolicy::set_log_std(const Vec& log_std) {
  if (log_std.size() != log_std_.size()) throw Error("policy: log_std size mismatch");
  log_std_ = log_std;
  clamp_log_std();
}

void GaussianPolicy::clamp_log_std() { log_std_ = log_std_.cwiseMax(kMinLogStd).cwiseMin(kMaxLogStd); }

ActionSample GaussianPolicy::sample_action(const Vec& state, Rng& rng) const {
  const Vec mu = mean(state);
  std::normal_distribution<double> n(0.0, 1.0);
  ActionSample out;
  out.pre_squash.resize(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) out.pre_squash[i] = mu[i] + std::exp(log_std_[i]) * n(rng);
  out.action = out.pre_squash.array().tanh().cwiseMax(-kActionEdge).cwiseMin(kActionEdge);
  out.log_prob = log_prob(state, out.action);
  return out;
}

Mat GaussianPolicy::mean(const Mat& states) const { return kMeanScale * mean_net_.predict(states); }

Vec GaussianPolicy::mean_action(const Vec& state) const { return mean(state).array().tanh(); }

double GaussianPolicy::log_prob(const Vec& state, const Vec& action) const {
  Vec lp = log_prob(Mat(state), Mat(action));
  return lp[0];
}

Mat GaussianPolicy::unsquash(const Mat& actions) {
  return actions.array().max(-kActionEdge).min(kActionEdge).atanh();
}

Vec GaussianPolicy::gaussian_log_prob(const Mat& states, const Mat& pre_squash) const {
  if (pre_squash.rows() != action_dim() || pre_squash.cols() != states.cols()) {
    throw Error("policy: action batch shape mismatch");
  }
  const Mat mu = mean(states);
  const Vec inv_std = (-log_std_).array().exp();
  const double norm = log_std_.sum() + kHalfLog2Pi * static_cast<double>(action_dim());
  const Mat z = (pre_squash - mu).array().colwise() * inv_std.array();
  return (-0.5 * z.array().square().colwise().sum()).transpose() - norm;
}

Vec GaussianPolicy::log_prob(const Mat& states, const Mat& actions) const {
  const Mat u = unsquash(actions);
  Vec lp = gaussian_log_prob(states, u);
  for (Eigen::Index k = 0; k < u.cols(); ++k) {
    for (Eigen::Index i = 0; i < u.rows(); ++i) lp[k] -= log_tanh_jacobian(u(i, k));
  }
  return lp;
}

double GaussianPolicy::entropy() const {
  return log_std_.sum() + (0.5 + kHalfLog2Pi) * static_cast<double>(action_dim());
}

env::PolicyFn GaussianPolicy::stochastic() const {
  return [this](const Vec& s, Rng& rng) { return sample_action(s, rng).action; };
}

env::PolicyFn GaussianPolicy::deterministic() const {
  return [this](const Vec& s, Rng&) { return mean_action(s); };
}

void GaussianPolicy::save(const std::string& path) const {
  std::vector<double> aux(log_std_.data(), log_std_.data() + log_std_.size());
  mean_net_.save(path, aux);
}

GaussianPolicy GaussianPolicy::load(const std::string& path, const env::EnvSpec& spec) {
  std::vector<double> aux;
  auto net = approx::Mlp::load(path, &aux);
  if (net.in_dim() != spec.state_dim || net.out_dim() != spec.action_dim ||
      static_cast<int>(aux.size()) != spec.action_dim) {
    throw Error("policy checkpoint '" + path + "' does not match the environment dimensions");
  }
  return GaussianPolicy(std::move(net), Eigen::Map<const Vec>(aux.data(), spec.action_dim),
                        spec.action_low, spec.action_high);
}

ValueNet ValueNet::make(int state_dim, const std::vector<int>& hidden, std::uint64_t seed) {
  return {approx::Mlp::make(state_dim, hidden, 1, approx::Activation::kTanh,
                            approx::Activation::kIdentity, seed)};
}

EvalResult evaluate(const env::PolicyFn& policy, const env::Environment& env, int n_episodes,
                    Rng& rng, bool keep_trajectories) {
  if (n_episodes < 1) throw Error("evaluate: n_episodes must be >= 1");
  EvalResult res;
  double total = 0.0;
  int successes = 0;
  for (int ep = 0; ep < n_episodes; ++ep) {
    Trajectory traj = env::rollout(policy, env, env.spec().horizon, rng);
    for (const auto& t : traj) total += env.ground_truth_reward(t.s_next);
    if (!traj.empty() && env.in_goal(traj.back().s_next)) ++successes;
    if (keep_trajectories) res.trajectories.push_back(std::move(traj));
  }
  res.mean_return = total / n_episodes;
  res.success_rate = static_cast<double>(successes) / n_episodes;
  return res;
}

EvalResult evaluate(const GaussianPolicy& policy, const env::Environment& env, int n_episodes,
                    Rng& rng, bool keep_trajectories) {
  return evaluate(policy.deterministic(), env, n_episodes, rng, keep_trajectories);
}

}  // namespace odirl::policy
