#include "odirl/experiment.hpp"

#include <cmath>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <spdlog/spdlog.h>

#include "odirl/csv.hpp"
#include "odirl/dd_classifiers.hpp"
#include "odirl/discriminator.hpp"
#include "odirl/env.hpp"
#include "odirl/ppo.hpp"
#include "odirl/replay_buffer.hpp"

namespace odirl::harness {

namespace fs = std::filesystem;

namespace {

struct InitSeeds {
  std::uint64_t policy, value, disc, classifier;
};

InitSeeds init_seeds(std::uint64_t seed) {
  Rng r = make_stream(seed, "init");
  InitSeeds s{};
  s.policy = r();
  s.value = r();
  s.disc = r();
  s.classifier = r();
  return s;
}

std::string opt_cell(const std::optional<double>& v) { return v ? csv::format_double(*v) : std::string(); }

class ProgressWriter {
 public:
  explicit ProgressWriter(const fs::path& path) : os_(path) {
    if (!os_) throw Error("cannot open '" + path.string() + "' for writing");
    os_ << kProgressHeader << '\n';
  }
  void write(const ProgressRow& row) {
    os_ << format_progress_row(row) << '\n';
    os_.flush();
  }

 private:
  std::ofstream os_;
};

class DiagnosticsWriter {
 public:
  explicit DiagnosticsWriter(const fs::path& path) : os_(path) {
    if (!os_) throw Error("cannot open '" + path.string() + "' for writing");
    os_ << "iteration,classifier_loss_sas,classifier_loss_sa,dd_mean,dd_std,disc_demo_accuracy,"
           "disc_policy_accuracy,policy_mean_reward\n";
  }
  void write(int it, const std::optional<dd::ClassifierLoss>& cl, const std::optional<double>& dd_mean,
             const std::optional<double>& dd_std, const std::optional<irl::DiscLoss>& dl, double reward) {
    os_ << it << ',' << (cl ? csv::format_double(cl->sas) : "") << ','
        << (cl ? csv::format_double(cl->sa) : "") << ',' << opt_cell(dd_mean) << ',' << opt_cell(dd_std) << ','
        << (dl ? csv::format_double(dl->demo_accuracy) : "") << ','
        << (dl ? csv::format_double(dl->policy_accuracy) : "") << ',' << csv::format_double(reward) << '\n';
  }

 private:
  std::ofstream os_;
};

fs::path prepare_output(const ExperimentConfig& config, const env::DomainPair& pair) {
  fs::path dir(config.output_dir);
  fs::create_directories(dir / "checkpoints");
  nlohmann::json resolved = config.to_json();
  resolved["resolved_alpha"] = config.effective_alpha();
  resolved["env_config_hash"] = pair.config_hash();
  std::ofstream os(dir / "config.json");
  os << resolved.dump(2) << '\n';
  return dir;
}

policy::EvalResult eval_policy(const policy::GaussianPolicy& pi, const env::Environment& env,
                               const ExperimentConfig& config, int iteration, bool keep = false) {
  // Evaluation draws from its own stream so it never perturbs training.
  Rng rng = make_stream(config.seed * 1000003ULL + static_cast<std::uint64_t>(iteration),
                        std::string("eval/") + std::string(to_string(env.domain())));
  return policy::evaluate(pi, env, config.eval_episodes, rng, keep);
}

bool is_eval_iteration(const ExperimentConfig& config, int t) {
  return t % config.eval_every == 0 || t == config.steps;
}

void assert_domain(const std::vector<Transition>& batch, Domain d) {
  for (const auto& t : batch) {
    if (t.domain != d) throw Error("domain integrity violated: mislabeled transition in classifier batch");
  }
}

void write_summary(const fs::path& dir, const RunResult& r, const ExperimentConfig& config) {
  nlohmann::json j{{"method", to_string(config.method)},
                   {"seed", config.seed},
                   {"alpha", config.effective_alpha()},
                   {"target_steps", r.counts.target_steps},
                   {"source_steps", r.counts.source_steps},
                   {"target_rollouts", r.counts.target_rollouts},
                   {"source_rollouts", r.counts.source_rollouts},
                   {"classifier_updates", r.counts.classifier_updates},
                   {"disc_updates", r.counts.disc_updates},
                   {"policy_updates", r.counts.policy_updates},
                   {"final_gt_return", r.final_return},
                   {"final_success_rate", r.final_success}};
  std::ofstream os(dir / "summary.json");
  os << j.dump(2) << '\n';
}

void write_eval_trajectories(const fs::path& dir, const policy::GaussianPolicy& pi,
                             const env::DomainPair& pair, const ExperimentConfig& config) {
  const auto& spec = pair.spec();
  for (Domain d : {Domain::kTarget, Domain::kSource}) {
    auto res = eval_policy(pi, pair.get(d), config, config.steps + 1, true);
    env::write_trajectories_csv((dir / ("eval_" + std::string(to_string(d)) + ".csv")).string(),
                                res.trajectories, spec.state_dim, spec.action_dim);
  }
}

void maybe_write_heatmap(const fs::path& dir, const irl::AirlDiscriminator& disc) {
  if (!disc.state_only() || disc.g_net().in_dim() != 2) return;
  irl::write_heatmap_csv((dir / "heatmap.csv").string(), irl::reward_heatmap(disc, irl::GridSpec{}));
}

policy::MaxEntTrainer make_trainer(const ExperimentConfig& config, const env::EnvSpec& spec,
                                   const InitSeeds& seeds) {
  auto pi = policy::GaussianPolicy::make(spec, config.policy_hidden, seeds.policy, config.init_log_std);
  auto v = policy::ValueNet::make(spec.state_dim, config.policy_hidden, seeds.value);
  return policy::MaxEntTrainer(std::move(pi), std::move(v), config.policy);
}

void push_window(std::deque<Trajectory>& window, Trajectory traj, int limit) {
  window.push_back(std::move(traj));
  while (static_cast<int>(window.size()) > limit) window.pop_front();
}

std::vector<Trajectory> as_vector(const std::deque<Trajectory>& window) {
  return {window.begin(), window.end()};
}

// r_hat = f - log pi (or its negation) for the generator.
policy::RewardFn airl_reward(const irl::AirlDiscriminator& disc, const policy::GaussianPolicy& pi,
                             const ExperimentConfig& config) {
  return [&disc, &pi, &config](const TransitionBatch& b) {
    const Vec f = disc.f_values(b);
    const Vec lp = pi.log_prob(b.s, b.a);
    Vec r(b.size());
    for (Eigen::Index i = 0; i < b.size(); ++i) {
      r[i] = irl::policy_reward(f[i], lp[i], config.flip_reward_sign, config.disc.logit_clamp);
    }
    return r;
  };
}

void save_checkpoint(const fs::path& dir, const std::string& name, const approx::Mlp& net) {
  net.save((dir / "checkpoints" / (name + ".ckpt")).string());
}

}  // namespace

std::string format_progress_row(const ProgressRow& row) {
  std::ostringstream os;
  os << row.iteration << ',' << row.target_steps << ',' << row.source_steps << ',' << opt_cell(row.disc_loss)
     << ',' << opt_cell(row.classifier_loss) << ',' << opt_cell(row.mean_dd) << ','
     << opt_cell(row.policy_entropy) << ',' << opt_cell(row.gt_return) << ',' << opt_cell(row.success_rate);
  return os.str();
}

void init_logging() {
  const char* lvl = std::getenv("ODIRL_LOG_LEVEL");
  if (lvl == nullptr) return;
  spdlog::set_level(spdlog::level::from_str(lvl));
}

ExpertResult train_expert(const ExperimentConfig& config) {
  const env::DomainPair pair = env::make_domain_pair(config.task, config.env);
  const env::Environment& src = pair.get(Domain::kSource);
  const env::EnvSpec& spec = pair.spec();
  fs::path dir = prepare_output(config, pair);
  const InitSeeds seeds = init_seeds(config.seed);
  auto pi = policy::GaussianPolicy::make(spec, config.policy_hidden, seeds.policy, config.expert.init_log_std);
  auto v = policy::ValueNet::make(spec.state_dim, config.policy_hidden, seeds.value);
  policy::MaxEntTrainer trainer(std::move(pi), std::move(v), config.expert.opt);
  Rng rollout_rng = make_stream(config.seed, "expert/rollout");
  Rng update_rng = make_stream(config.seed, "expert/update");

  // Ground truth is the expert's training signal; it is read from the
  // environment, never from stored transitions.
  policy::RewardFn gt = [&src](const TransitionBatch& b) {
    Vec r(b.size());
    for (Eigen::Index i = 0; i < b.size(); ++i) r[i] = src.ground_truth_reward(b.s_next.col(i));
    return r;
  };

  std::ofstream log(dir / "expert_progress.csv");
  log << "iteration,mean_reward,policy_entropy,gt_return,success_rate\n";
  ExpertResult out{trainer.policy(), 0.0, 0.0};
  for (int it = 1; it <= config.expert.iterations; ++it) {
    std::vector<Trajectory> batch;
    for (int e = 0; e < config.expert.episodes_per_batch; ++e) {
      batch.push_back(env::rollout(trainer.policy().stochastic(), src, spec.horizon, rollout_rng));
    }
    auto st = trainer.maxent_update(batch, gt, update_rng);
    if (it % config.eval_every == 0 || it == config.expert.iterations) {
      auto ev = eval_policy(trainer.policy(), src, config, it);
      log << it << ',' << csv::format_double(st.mean_reward) << ',' << csv::format_double(st.entropy) << ','
          << csv::format_double(ev.mean_return) << ',' << csv::format_double(ev.success_rate) << '\n';
      spdlog::info("expert it {} return {:.3f} success {:.2f} entropy {:.3f}", it, ev.mean_return,
                   ev.success_rate, st.entropy);
      out.final_return = ev.mean_return;
      out.final_success = ev.success_rate;
    }
  }
  if (config.expert.iterations == 0) {
    auto ev = eval_policy(trainer.policy(), src, config, 0);
    out.final_return = ev.mean_return;
    out.final_success = ev.success_rate;
  }
  out.policy = trainer.policy();
  out.policy.save((dir / "expert.ckpt").string());
  return out;
}

buffers::DemoSet collect_demos(const ExperimentConfig& config, const policy::GaussianPolicy& expert) {
  const env::DomainPair pair = env::make_domain_pair(config.task, config.env);
  const env::Environment& src = pair.get(Domain::kSource);
  const env::EnvSpec& spec = pair.spec();
  Rng rng = make_stream(config.seed, "demos");
  std::vector<Trajectory> trajs;
  const env::PolicyFn fn = config.expert.stochastic_demos ? expert.stochastic() : expert.deterministic();
  for (int i = 0; i < config.expert.num_demos; ++i) trajs.push_back(env::rollout(fn, src, spec.horizon, rng));
  buffers::DemoSet demos(std::move(trajs), {pair.config_hash(), config.seed, spec.horizon});
  fs::create_directories(config.output_dir);
  buffers::save_demos((fs::path(config.output_dir) / "demos.csv").string(), demos, spec.state_dim,
                      spec.action_dim);
  return demos;
}

buffers::DemoSet load_demos_for(const ExperimentConfig& config) {
  if (config.demos_path.empty()) throw Error("config: demos_path is required for method " + to_string(config.method));
  const env::DomainPair pair = env::make_domain_pair(config.task, config.env);
  return buffers::load_demos(config.demos_path, pair.spec(), pair.config_hash()).demos;
}

RunResult run_odirl(const ExperimentConfig& config, const buffers::DemoSet& demos) {
  config.validate();
  const bool gail = config.method == Method::kGail;
  if (config.method != Method::kOdirl && config.method != Method::kAirl && !gail) {
    throw Error("run_odirl: method " + to_string(config.method) + " does not use the adversarial target loop");
  }
  const env::DomainPair pair = env::make_domain_pair(config.task, config.env);
  const env::EnvSpec& spec = pair.spec();
  const env::Environment& target = pair.get(Domain::kTarget);
  const env::Environment& source = pair.get(Domain::kSource);
  fs::path dir = prepare_output(config, pair);
  ProgressWriter progress(dir / "progress.csv");
  DiagnosticsWriter diag(dir / "diagnostics.csv");

  const InitSeeds seeds = init_seeds(config.seed);
  policy::MaxEntTrainer trainer = make_trainer(config, spec, seeds);
  irl::AirlTrainer airl(irl::AirlDiscriminator::make(spec.state_dim, spec.action_dim, config.disc, seeds.disc),
                        config.disc);
  irl::GailTrainer gail_trainer(irl::GailDiscriminator::make(spec.state_dim, spec.action_dim, config.disc.hidden,
                                                             seeds.disc),
                                config.disc);
  dd::DDConfig dd_cfg = config.dd;
  dd_cfg.alpha = config.effective_alpha();
  dd::DDEstimator estimator(
      dd::ClassifierPair::make(spec.state_dim, spec.action_dim, config.classifier_hidden, seeds.classifier), dd_cfg);
  const bool use_source = !gail;

  buffers::ReplayBuffer b_target(config.target_capacity, Domain::kTarget);
  buffers::ReplayBuffer b_source(config.source_capacity, Domain::kSource);
  const TransitionBatch demo_all = stack(std::span<const Transition>(demos.transitions()));

  Rng target_rng = make_stream(config.seed, "rollout/target");
  Rng source_rng = make_stream(config.seed, "rollout/source");
  Rng buffer_rng = make_stream(config.seed, "buffers");
  Rng classifier_rng = make_stream(config.seed, "classifier");
  Rng update_rng = make_stream(config.seed, "policy_update");
  const env::RolloutOptions ropts{config.poison_gt_reward};

  std::deque<Trajectory> window;
  RunResult result;
  result.output_dir = dir.string();
  InteractionCounts& counts = result.counts;

  for (int t = 1; t <= config.steps; ++t) {
    Trajectory traj = env::rollout(trainer.policy().stochastic(), target, spec.horizon, target_rng, ropts);
    counts.target_steps += static_cast<long>(traj.size());
    ++counts.target_rollouts;
    b_target.push(traj);
    push_window(window, std::move(traj), config.policy_window_episodes);

    if (use_source && (t - 1) % config.ratio == 0) {
      Trajectory straj = env::rollout(trainer.policy().stochastic(), source, spec.horizon, source_rng, ropts);
      counts.source_steps += static_cast<long>(straj.size());
      ++counts.source_rollouts;
      b_source.push(straj);
    }

    std::optional<dd::ClassifierLoss> cl;
    std::optional<double> dd_mean, dd_std;
    if (use_source && !b_source.empty()) {
      for (int k = 0; k < dd_cfg.steps_per_iteration; ++k) {
        auto sb = b_source.sample(static_cast<std::size_t>(dd_cfg.batch_size), buffer_rng);
        auto tb = b_target.sample(static_cast<std::size_t>(dd_cfg.batch_size), buffer_rng);
        assert_domain(sb, Domain::kSource);
        assert_domain(tb, Domain::kTarget);
        cl = estimator.train_step(stack(std::span<const Transition>(sb)), stack(std::span<const Transition>(tb)),
                                  classifier_rng);
        ++counts.classifier_updates;
      }
      const Vec raw = dd::dd_raw(estimator.pair(), demo_all);
      dd_mean = raw.mean();
      dd_std = std::sqrt((raw.array() - *dd_mean).square().mean());
    }

    std::optional<irl::DiscLoss> dl;
    const auto bs = static_cast<std::size_t>(config.disc.batch_size);
    for (int k = 0; k < config.disc.steps_per_iteration; ++k) {
      const TransitionBatch demo_b = demos.sample_batch(bs, buffer_rng);
      const TransitionBatch pol_b = b_target.sample_batch(bs, buffer_rng);
      if (gail) {
        dl = gail_trainer.update(demo_b, pol_b);
      } else {
        const Vec demo_dd = use_source ? dd::dd_values(estimator.pair(), demo_b, dd_cfg)
                                       : Vec::Zero(demo_b.size()).eval();
        const Vec demo_lp = trainer.policy().log_prob(demo_b.s, demo_b.a);
        const Vec pol_lp = trainer.policy().log_prob(pol_b.s, pol_b.a);
        dl = airl.update(demo_b, demo_lp, demo_dd, pol_b, pol_lp);
      }
      ++counts.disc_updates;
    }

    policy::RewardFn reward_fn;
    if (gail) {
      reward_fn = [&gail_trainer, &config](const TransitionBatch& b) {
        return gail_trainer.disc().gail_policy_reward(b, config.disc.logit_clamp);
      };
    } else {
      reward_fn = airl_reward(airl.disc(), trainer.policy(), config);
    }
    const auto batch = as_vector(window);
    const policy::UpdateStats st = trainer.maxent_update(batch, reward_fn, update_rng);
    ++counts.policy_updates;

    ProgressRow row;
    row.iteration = t;
    row.target_steps = counts.target_steps;
    row.source_steps = counts.source_steps;
    if (dl) row.disc_loss = dl->loss;
    if (cl) row.classifier_loss = cl->total();
    row.mean_dd = dd_mean;
    row.policy_entropy = st.entropy;
    if (is_eval_iteration(config, t)) {
      auto ev = eval_policy(trainer.policy(), target, config, t);
      row.gt_return = ev.mean_return;
      row.success_rate = ev.success_rate;
      result.final_return = ev.mean_return;
      result.final_success = ev.success_rate;
      spdlog::info("[{} a={} seed={}] it {} return {:.3f} success {:.2f} disc {:.3f} dd {:.3f}",
                   to_string(config.method), dd_cfg.alpha, config.seed, t, ev.mean_return, ev.success_rate,
                   dl ? dl->loss : 0.0, dd_mean.value_or(0.0));
    }
    progress.write(row);
    diag.write(t, cl, dd_mean, dd_std, dl, st.mean_reward);
    result.rows.push_back(row);

    if (config.checkpoint_every > 0 && t % config.checkpoint_every == 0) {
      trainer.policy().save((dir / "checkpoints" / ("policy_" + std::to_string(t) + ".ckpt")).string());
    }
  }

  trainer.policy().save((dir / "checkpoints" / "policy.ckpt").string());
  save_checkpoint(dir, "value", trainer.value().net);
  if (gail) {
    save_checkpoint(dir, "gail_d", gail_trainer.disc().d_net());
  } else {
    save_checkpoint(dir, "g", airl.disc().g_net());
    save_checkpoint(dir, "h", airl.disc().h_net());
    save_checkpoint(dir, "q_sas", estimator.pair().q_sas);
    save_checkpoint(dir, "q_sa", estimator.pair().q_sa);
    maybe_write_heatmap(dir, airl.disc());
  }
  write_eval_trajectories(dir, trainer.policy(), pair, config);
  write_summary(dir, result, config);
  result.policy = trainer.policy();
  return result;
}

namespace {

RunResult run_expert_transfer(const ExperimentConfig& config) {
  if (config.expert_path.empty()) throw Error("config: expert_path is required for expert_transfer");
  const env::DomainPair pair = env::make_domain_pair(config.task, config.env);
  fs::path dir = prepare_output(config, pair);
  auto expert = policy::GaussianPolicy::load(config.expert_path, pair.spec());
  ProgressWriter progress(dir / "progress.csv");
  auto ev = eval_policy(expert, pair.get(Domain::kTarget), config, 0);
  RunResult result;
  result.output_dir = dir.string();
  ProgressRow row;
  row.iteration = 0;
  row.gt_return = ev.mean_return;
  row.success_rate = ev.success_rate;
  progress.write(row);
  result.rows.push_back(row);
  result.final_return = ev.mean_return;
  result.final_success = ev.success_rate;
  write_eval_trajectories(dir, expert, pair, config);
  write_summary(dir, result, config);
  result.policy = expert;
  return result;
}

// AIRL in the source domain under the same source budget as odirl (ceil(N/r)
// rollouts, each followed by `multiplier` discriminator and policy updates),
// then g transferred as the reward for a fresh target-domain policy.
RunResult run_airl_source_transfer(const ExperimentConfig& config, const buffers::DemoSet& demos) {
  const env::DomainPair pair = env::make_domain_pair(config.task, config.env);
  const env::EnvSpec& spec = pair.spec();
  const env::Environment& target = pair.get(Domain::kTarget);
  const env::Environment& source = pair.get(Domain::kSource);
  fs::path dir = prepare_output(config, pair);
  ProgressWriter progress(dir / "progress.csv");

  const InitSeeds seeds = init_seeds(config.seed);
  policy::MaxEntTrainer src_trainer = make_trainer(config, spec, seeds);
  irl::AirlTrainer airl(irl::AirlDiscriminator::make(spec.state_dim, spec.action_dim, config.disc, seeds.disc),
                        config.disc);
  buffers::ReplayBuffer b_source(config.source_capacity, Domain::kSource);
  Rng source_rng = make_stream(config.seed, "rollout/source");
  Rng target_rng = make_stream(config.seed, "rollout/target");
  Rng buffer_rng = make_stream(config.seed, "buffers");
  Rng update_rng = make_stream(config.seed, "policy_update");
  const env::RolloutOptions ropts{config.poison_gt_reward};

  RunResult result;
  result.output_dir = dir.string();
  InteractionCounts& counts = result.counts;
  const int source_rollouts = (config.steps + config.ratio - 1) / config.ratio;
  const int multiplier = config.effective_grad_multiplier();
  const auto bs = static_cast<std::size_t>(config.disc.batch_size);
  std::deque<Trajectory> window;
  double last_disc_loss = 0.0;

  for (int k = 0; k < source_rollouts; ++k) {
    Trajectory traj = env::rollout(src_trainer.policy().stochastic(), source, spec.horizon, source_rng, ropts);
    counts.source_steps += static_cast<long>(traj.size());
    ++counts.source_rollouts;
    b_source.push(traj);
    push_window(window, std::move(traj), config.policy_window_episodes);
    const auto batch = as_vector(window);
    for (int m = 0; m < multiplier; ++m) {
      for (int d = 0; d < config.disc.steps_per_iteration; ++d) {
        const TransitionBatch demo_b = demos.sample_batch(bs, buffer_rng);
        const TransitionBatch pol_b = b_source.sample_batch(bs, buffer_rng);
        const Vec demo_lp = src_trainer.policy().log_prob(demo_b.s, demo_b.a);
        const Vec pol_lp = src_trainer.policy().log_prob(pol_b.s, pol_b.a);
        last_disc_loss = airl.update(demo_b, demo_lp, Vec::Zero(demo_b.size()), pol_b, pol_lp).loss;
        ++counts.disc_updates;
      }
      src_trainer.maxent_update(batch, airl_reward(airl.disc(), src_trainer.policy(), config), update_rng);
      ++counts.policy_updates;
    }
  }
  spdlog::info("[airl_source_transfer seed={}] source phase done: {} rollouts, {} steps, disc loss {:.3f}",
               config.seed, counts.source_rollouts, counts.source_steps, last_disc_loss);

  // Transfer g as a fixed reward; a fresh generator learns in the target.
  const InitSeeds target_seeds = init_seeds(config.seed ^ 0x9e3779b97f4a7c15ULL);
  policy::MaxEntTrainer trainer = make_trainer(config, spec, target_seeds);
  const irl::AirlDiscriminator& disc = airl.disc();
  policy::RewardFn transferred = [&disc](const TransitionBatch& b) { return disc.g_values(b.s, b.a); };
  window.clear();
  for (int t = 1; t <= config.steps; ++t) {
    Trajectory traj = env::rollout(trainer.policy().stochastic(), target, spec.horizon, target_rng, ropts);
    counts.target_steps += static_cast<long>(traj.size());
    ++counts.target_rollouts;
    push_window(window, std::move(traj), config.policy_window_episodes);
    const auto batch = as_vector(window);
    const auto st = trainer.maxent_update(batch, transferred, update_rng);
    ++counts.policy_updates;
    ProgressRow row;
    row.iteration = t;
    row.target_steps = counts.target_steps;
    row.source_steps = counts.source_steps;
    row.policy_entropy = st.entropy;
    if (is_eval_iteration(config, t)) {
      auto ev = eval_policy(trainer.policy(), target, config, t);
      row.gt_return = ev.mean_return;
      row.success_rate = ev.success_rate;
      result.final_return = ev.mean_return;
      result.final_success = ev.success_rate;
    }
    progress.write(row);
    result.rows.push_back(row);
  }
  trainer.policy().save((dir / "checkpoints" / "policy.ckpt").string());
  save_checkpoint(dir, "g", disc.g_net());
  save_checkpoint(dir, "h", disc.h_net());
  maybe_write_heatmap(dir, disc);
  write_eval_trajectories(dir, trainer.policy(), pair, config);
  write_summary(dir, result, config);
  result.policy = trainer.policy();
  return result;
}

}  // namespace

RunResult run_baseline(const ExperimentConfig& config, const std::optional<buffers::DemoSet>& demos) {
  config.validate();
  switch (config.method) {
    case Method::kExpertTransfer:
      return run_expert_transfer(config);
    case Method::kAirl:
    case Method::kGail:
      if (!demos) throw Error("run_baseline: missing demos");
      return run_odirl(config, *demos);
    case Method::kAirlSourceTransfer:
      if (!demos) throw Error("run_baseline: missing demos");
      return run_airl_source_transfer(config, *demos);
    case Method::kOdirl:
      break;
  }
  throw Error("run_baseline: odirl is not a baseline");
}

RunResult run(const ExperimentConfig& config, const buffers::DemoSet& demos) {
  if (config.method == Method::kOdirl) return run_odirl(config, demos);
  return run_baseline(config, demos);
}

RunResult run(const ExperimentConfig& config) {
  if (config.method == Method::kExpertTransfer) return run_baseline(config, std::nullopt);
  return run(config, load_demos_for(config));
}

std::string alpha_dir_name(double alpha) {
  std::ostringstream os;
  os << "alpha_" << alpha;
  return os.str();
}

std::vector<RunResult> run_ablation(const ExperimentConfig& config, const std::vector<double>& alphas,
                                    const buffers::DemoSet& demos) {
  if (config.method != Method::kOdirl) throw Error("run_ablation: method must be odirl");
  if (alphas.empty()) throw Error("run_ablation: empty alpha list");
  std::vector<RunResult> out;
  for (double a : alphas) {
    ExperimentConfig c = config;
    c.alpha = a;
    c.output_dir = (fs::path(config.output_dir) / alpha_dir_name(a)).string();
    out.push_back(run_odirl(c, demos));
  }
  return out;
}

}  // namespace odirl::harness
