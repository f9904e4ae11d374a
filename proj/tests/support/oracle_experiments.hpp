#pragma once

// Small synthetic experiments with closed-form or enumerable answers, shared by
// the unit tests and the acceptance runner.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "odirl/dd_classifiers.hpp"
#include "odirl/discriminator.hpp"
#include "odirl/env.hpp"
#include "odirl/point_maze.hpp"

namespace odirl::testing {

inline double normal_log_pdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return -0.5 * z * z - std::log(sd) - 0.5 * std::log(2.0 * std::numbers::pi);
}

// s, a ~ U(-1, 1); s' ~ N(s + a + shift, sigma).
inline TransitionBatch gaussian_domain_batch(int n, double shift, double sigma, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::normal_distribution<double> noise(0.0, sigma);
  TransitionBatch b;
  b.s.resize(1, n);
  b.a.resize(1, n);
  b.s_next.resize(1, n);
  b.done.assign(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    b.s(0, i) = u(rng);
    b.a(0, i) = u(rng);
    b.s_next(0, i) = b.s(0, i) + b.a(0, i) + shift + noise(rng);
  }
  return b;
}

struct GaussianDDResult {
  double mean_abs_error = 0.0;
  double max_abs_error = 0.0;
  int grid_points = 0;
};

// Trains a classifier pair on the 1-D pair (mu_src = 0, mu_tgt = 0.3,
// sigma = 0.5) and compares its DD with the Gaussian log-density ratio over a
// 20 x 20 x 20 grid. The s' axis is laid out relative to s + a, spanning both
// means +- 1.2 sigma, so every grid point lies where the data has support.
inline GaussianDDResult gaussian_dd_experiment(std::uint64_t seed, int steps = 3000) {
  constexpr double kMuSrc = 0.0, kMuTgt = 0.3, kSigma = 0.5;
  dd::DDConfig cfg;
  cfg.alpha = 1.0;
  cfg.dd_clip = 0.0;
  cfg.input_noise_std = 0.0;
  cfg.learning_rate = 1e-3;
  cfg.batch_size = 256;
  dd::DDEstimator est(dd::ClassifierPair::make(1, 1, {64, 64}, seed), cfg);
  Rng rng(seed);
  for (int i = 0; i < steps; ++i) {
    est.train_step(gaussian_domain_batch(cfg.batch_size, kMuSrc, kSigma, rng),
                   gaussian_domain_batch(cfg.batch_size, kMuTgt, kSigma, rng), rng);
  }
  constexpr int kN = 20;
  TransitionBatch grid;
  grid.s.resize(1, kN * kN * kN);
  grid.a.resize(1, kN * kN * kN);
  grid.s_next.resize(1, kN * kN * kN);
  grid.done.assign(kN * kN * kN, 0);
  std::vector<double> truth;
  const double lo = kMuSrc - 1.2 * kSigma, hi = kMuTgt + 1.2 * kSigma;
  int k = 0;
  for (int i = 0; i < kN; ++i) {
    for (int j = 0; j < kN; ++j) {
      for (int m = 0; m < kN; ++m, ++k) {
        const double s = -1.0 + 2.0 * (i + 0.5) / kN;
        const double a = -1.0 + 2.0 * (j + 0.5) / kN;
        const double s_next = s + a + lo + (hi - lo) * m / (kN - 1);
        grid.s(0, k) = s;
        grid.a(0, k) = a;
        grid.s_next(0, k) = s_next;
        truth.push_back(normal_log_pdf(s_next, s + a + kMuTgt, kSigma) -
                        normal_log_pdf(s_next, s + a + kMuSrc, kSigma));
      }
    }
  }
  const Vec dd = dd::dd_values(est.pair(), grid, cfg);
  GaussianDDResult r;
  r.grid_points = k;
  for (int i = 0; i < k; ++i) {
    const double e = std::abs(dd[i] - truth[static_cast<std::size_t>(i)]);
    r.mean_abs_error += e / k;
    r.max_abs_error = std::max(r.max_abs_error, e);
  }
  return r;
}

inline TransitionBatch random_policy_batch(const env::Environment& env, int episodes, Rng& rng,
                                           Domain tag) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  env::PolicyFn random = [&u, &env](const Vec&, Rng& r) {
    Vec a(env.spec().action_dim);
    for (Eigen::Index i = 0; i < a.size(); ++i) a[i] = u(r);
    return a;
  };
  std::vector<Trajectory> trajs;
  for (int e = 0; e < episodes; ++e) trajs.push_back(env::rollout(random, env, env.spec().horizon, rng));
  for (auto& t : trajs) {
    for (auto& x : t) x.domain = tag;
  }
  return stack(std::span<const Trajectory>(trajs));
}

inline TransitionBatch columns(const TransitionBatch& b, std::span<const Eigen::Index> idx) {
  TransitionBatch out;
  const auto n = static_cast<Eigen::Index>(idx.size());
  out.s.resize(b.s.rows(), n);
  out.a.resize(b.a.rows(), n);
  out.s_next.resize(b.s_next.rows(), n);
  out.done.resize(idx.size());
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index i = idx[static_cast<std::size_t>(k)];
    out.s.col(k) = b.s.col(i);
    out.a.col(k) = b.a.col(i);
    out.s_next.col(k) = b.s_next.col(i);
    out.done[static_cast<std::size_t>(k)] = b.done[static_cast<std::size_t>(i)];
  }
  return out;
}

inline TransitionBatch sample_columns(const TransitionBatch& b, int n, Rng& rng) {
  std::uniform_int_distribution<Eigen::Index> pick(0, b.size() - 1);
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  for (auto& i : idx) i = pick(rng);
  return columns(b, idx);
}

struct ZeroGapResult {
  double mean_abs_dd = 0.0;
  double accuracy_sas = 0.0;
  double accuracy_sa = 0.0;
  double loss = 0.0;
};

// Both "domains" are one PointMaze instance; the classifiers train on finite
// buffers and are scored on fresh transitions.
inline ZeroGapResult zero_gap_experiment(std::uint64_t seed, int steps = 1000) {
  env::PointMaze maze(env::PointMazeConfig{}, Domain::kSource);
  Rng rng(seed);
  const TransitionBatch train_src = random_policy_batch(maze, 100, rng, Domain::kSource);
  const TransitionBatch train_tgt = random_policy_batch(maze, 100, rng, Domain::kTarget);
  dd::DDConfig cfg;
  cfg.dd_clip = 5.0;
  cfg.learning_rate = 3e-4;
  dd::DDEstimator est(dd::ClassifierPair::make(2, 2, {64, 64}, seed), cfg);
  for (int i = 0; i < steps; ++i) {
    est.train_step(sample_columns(train_src, cfg.batch_size, rng), sample_columns(train_tgt, cfg.batch_size, rng),
                   rng);
  }
  const TransitionBatch held_src = random_policy_batch(maze, 40, rng, Domain::kSource);
  const TransitionBatch held_tgt = random_policy_batch(maze, 40, rng, Domain::kTarget);
  ZeroGapResult r;
  const Vec dd = dd::dd_values(est.pair(), held_tgt, cfg);
  const Vec dd_src = dd::dd_values(est.pair(), held_src, cfg);
  r.mean_abs_dd = (dd.cwiseAbs().sum() + dd_src.cwiseAbs().sum()) / static_cast<double>(dd.size() + dd_src.size());
  const dd::ClassifierLoss m = dd::classifier_metrics(est.pair(), held_src, held_tgt);
  r.accuracy_sas = m.accuracy_sas;
  r.accuracy_sa = m.accuracy_sa;
  r.loss = m.total();
  return r;
}

// A 3-state, 2-action MDP with enumerable distributions.
struct TabularMdp {
  static constexpr int kS = 3;
  static constexpr int kA = 2;
  using Dyn = std::array<std::array<std::array<double, kS>, kA>, kS>;  // P[s][a][s']
  using Pol = std::array<std::array<double, kA>, kS>;                  // pi[s][a]

  static Dyn source_dynamics() {
    return {{{{{0.70, 0.20, 0.10}, {0.10, 0.80, 0.10}}},
             {{{0.30, 0.40, 0.30}, {0.05, 0.15, 0.80}}},
             {{{0.50, 0.25, 0.25}, {0.20, 0.20, 0.60}}}}};
  }
  static Dyn target_dynamics() {
    return {{{{{0.40, 0.50, 0.10}, {0.10, 0.30, 0.60}}},
             {{{0.30, 0.40, 0.30}, {0.60, 0.15, 0.25}}},
             {{{0.10, 0.45, 0.45}, {0.25, 0.50, 0.25}}}}};
  }
  static Pol expert_policy() { return {{{0.9, 0.1}, {0.2, 0.8}, {0.6, 0.4}}}; }
  static Pol learner_policy() { return {{{0.5, 0.5}, {0.7, 0.3}, {0.3, 0.7}}}; }

  // Mean state occupancy over `horizon` steps from a uniform start.
  static std::array<double, kS> occupancy(const Dyn& p, const Pol& pi, int horizon) {
    std::array<double, kS> d{1.0 / 3, 1.0 / 3, 1.0 / 3};
    std::array<double, kS> occ{};
    for (int t = 0; t < horizon; ++t) {
      std::array<double, kS> next{};
      for (int s = 0; s < kS; ++s) {
        occ[s] += d[s] / horizon;
        for (int a = 0; a < kA; ++a) {
          for (int s2 = 0; s2 < kS; ++s2) next[s2] += d[s] * pi[s][a] * p[s][a][s2];
        }
      }
      d = next;
    }
    return occ;
  }
};

// s = one-hot(s), a = one-hot(s, a) and s' = one-hot(s, a, s') when
// `joint_next`, so a linear layer on any prefix of the stacked input is a full
// lookup table. Without `joint_next`, s' = one-hot(s') like s.
inline void tabular_encode(int s, int a, int s2, Mat& S, Mat& A, Mat& S2, Eigen::Index col,
                           bool joint_next = true) {
  constexpr int nS = TabularMdp::kS, nA = TabularMdp::kA;
  S.col(col).setZero();
  A.col(col).setZero();
  S2.col(col).setZero();
  S(s, col) = 1.0;
  A(s * nA + a, col) = 1.0;
  S2(joint_next ? (s * nA + a) * nS + s2 : s2, col) = 1.0;
}

// Every (s, a, s') tuple replicated in proportion to `prob`, so a full-batch
// gradient is the gradient of the expected loss.
inline TransitionBatch tabular_batch(const std::function<double(int, int, int)>& prob, int total,
                                     bool joint_next = true) {
  constexpr int nS = TabularMdp::kS, nA = TabularMdp::kA;
  std::vector<std::array<int, 3>> tuples;
  for (int s = 0; s < nS; ++s) {
    for (int a = 0; a < nA; ++a) {
      for (int s2 = 0; s2 < nS; ++s2) {
        const int count = static_cast<int>(std::lround(prob(s, a, s2) * total));
        for (int c = 0; c < count; ++c) tuples.push_back({s, a, s2});
      }
    }
  }
  TransitionBatch b;
  const auto n = static_cast<Eigen::Index>(tuples.size());
  b.s.resize(nS, n);
  b.a.resize(nS * nA, n);
  b.s_next.resize(joint_next ? nS * nA * nS : nS, n);
  b.done.assign(tuples.size(), 0);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto& t = tuples[static_cast<std::size_t>(k)];
    tabular_encode(t[0], t[1], t[2], b.s, b.a, b.s_next, k, joint_next);
  }
  return b;
}

inline approx::Mlp linear_table(int in, int out) {
  return approx::Mlp({{in, out}}, {approx::Activation::kIdentity}, 0, 0.0);
}

struct TabularResult {
  double max_abs_error = 0.0;
  int cells_checked = 0;
};

// Tabular logistic-regression classifiers trained on exact expected losses;
// DD is compared with log P_tgt(s'|s,a) - log P_src(s'|s,a) wherever both
// probabilities are at least 0.05.
inline TabularResult tabular_dd_experiment(int steps = 4000) {
  constexpr int nS = TabularMdp::kS, nA = TabularMdp::kA;
  const auto ps = TabularMdp::source_dynamics();
  const auto pt = TabularMdp::target_dynamics();
  const double u = 1.0 / (nS * nA);
  const TransitionBatch src = tabular_batch([&](int s, int a, int s2) { return u * ps[s][a][s2]; }, 20000);
  const TransitionBatch tgt = tabular_batch([&](int s, int a, int s2) { return u * pt[s][a][s2]; }, 20000);
  dd::ClassifierPair pair;
  pair.q_sas = linear_table(nS + nS * nA + nS * nA * nS, 2);
  pair.q_sa = linear_table(nS + nS * nA, 2);
  dd::DDConfig cfg;
  cfg.dd_clip = 0.0;
  cfg.input_noise_std = 0.0;
  cfg.learning_rate = 0.05;
  dd::DDEstimator est(pair, cfg);
  Rng rng(0);
  for (int i = 0; i < steps; ++i) est.train_step(src, tgt, rng);
  TabularResult r;
  for (int s = 0; s < nS; ++s) {
    for (int a = 0; a < nA; ++a) {
      for (int s2 = 0; s2 < nS; ++s2) {
        if (ps[s][a][s2] < 0.05 || pt[s][a][s2] < 0.05) continue;
        Mat mS(nS, 1), mA(nS * nA, 1), mS2(nS * nA * nS, 1);
        tabular_encode(s, a, s2, mS, mA, mS2, 0);
        const double dd = dd::dd_value(est.pair(), mS.col(0), mA.col(0), mS2.col(0), cfg);
        const double truth = std::log(pt[s][a][s2]) - std::log(ps[s][a][s2]);
        r.max_abs_error = std::max(r.max_abs_error, std::abs(dd - truth));
        ++r.cells_checked;
      }
    }
  }
  return r;
}

struct TabularDiscResult {
  double max_abs_error = 0.0;  // converged D vs p_E / (p_E + p_pi)
  double max_ratio_log_error = 0.0;  // log D/(1-D) vs log p_E/p_pi
  int cells_checked = 0;
};

// AIRL discriminator with tabular g(s, a) and h(s) on expert and learner
// occupancy measures of one 3-state MDP (expected-loss batches, log pi from
// the learner policy). The optimum is D = p_E / (p_E + p_pi) per (s, a).
inline TabularDiscResult tabular_disc_experiment(double gamma = 0.9, int steps = 4000) {
  constexpr int nS = TabularMdp::kS, nA = TabularMdp::kA;
  constexpr int kHorizon = 20;
  const auto p = TabularMdp::source_dynamics();
  const auto pe = TabularMdp::expert_policy();
  const auto pl = TabularMdp::learner_policy();
  const auto occ_e = TabularMdp::occupancy(p, pe, kHorizon);
  const auto occ_l = TabularMdp::occupancy(p, pl, kHorizon);
  auto p_e = [&](int s, int a) { return occ_e[s] * pe[s][a]; };
  auto p_l = [&](int s, int a) { return occ_l[s] * pl[s][a]; };
  const TransitionBatch demo = tabular_batch([&](int s, int a, int s2) { return p_e(s, a) * p[s][a][s2]; }, 40000, false);
  const TransitionBatch pol = tabular_batch([&](int s, int a, int s2) { return p_l(s, a) * p[s][a][s2]; }, 40000, false);
  auto log_pi = [&](const TransitionBatch& b) {
    Vec lp(b.size());
    for (Eigen::Index k = 0; k < b.size(); ++k) {
      Eigen::Index sa = 0;
      b.a.col(k).maxCoeff(&sa);
      lp[k] = std::log(pl[sa / nA][sa % nA]);
    }
    return lp;
  };
  irl::AirlDiscriminator disc(linear_table(nS + nS * nA, 1), linear_table(nS, 1), gamma, false);
  irl::DiscriminatorConfig cfg;
  cfg.state_only = false;
  cfg.gamma = gamma;
  cfg.learning_rate = 0.05;
  irl::AirlTrainer trainer(disc, cfg);
  const Vec demo_lp = log_pi(demo), pol_lp = log_pi(pol);
  const Vec zero_dd = Vec::Zero(demo.size());
  for (int i = 0; i < steps; ++i) trainer.update(demo, demo_lp, zero_dd, pol, pol_lp);
  TabularDiscResult r;
  for (int s = 0; s < nS; ++s) {
    for (int a = 0; a < nA; ++a) {
      const double want = p_e(s, a) / (p_e(s, a) + p_l(s, a));
      for (int s2 = 0; s2 < nS; ++s2) {
        Mat mS(nS, 1), mA(nS * nA, 1), mS2(nS, 1);
        tabular_encode(s, a, s2, mS, mA, mS2, 0, false);
        const double f = trainer.disc().f_value(mS.col(0), mA.col(0), mS2.col(0));
        const double z = irl::disc_logit(f, std::log(pl[s][a]), 0.0);
        const double d = irl::sigmoid(z);
        r.max_abs_error = std::max(r.max_abs_error, std::abs(d - want));
        r.max_ratio_log_error = std::max(r.max_ratio_log_error, std::abs(z - std::log(p_e(s, a) / p_l(s, a))));
        ++r.cells_checked;
      }
    }
  }
  return r;
}

// Largest change of any discriminator logit (demo and policy form) when a
// constant is added to h's output bias, at gamma = 1.
inline double telescoping_max_logit_change(double c, std::uint64_t seed) {
  irl::DiscriminatorConfig cfg;
  cfg.gamma = 1.0;
  auto disc = irl::AirlDiscriminator::make(2, 2, cfg, seed);
  Rng rng(seed);
  env::PointMaze maze(env::PointMazeConfig{}, Domain::kTarget);
  const TransitionBatch b = random_policy_batch(maze, 20, rng, Domain::kTarget);
  std::normal_distribution<double> n(0.0, 1.0);
  Vec log_pi(b.size()), dd(b.size());
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    log_pi[i] = n(rng);
    dd[i] = n(rng);
  }
  const Vec f0 = disc.f_values(b);
  auto p = disc.h_net().mutable_params();
  p[p.size() - 1] += c;  // output bias of h
  const Vec f1 = disc.f_values(b);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    worst = std::max(worst, std::abs(irl::disc_logit(f1[i], log_pi[i], dd[i]) - irl::disc_logit(f0[i], log_pi[i], dd[i])));
    worst = std::max(worst, std::abs(irl::disc_logit(f1[i], log_pi[i], 0.0) - irl::disc_logit(f0[i], log_pi[i], 0.0)));
  }
  return worst;
}

}  // namespace odirl::testing
