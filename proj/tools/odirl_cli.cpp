#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "odirl/csv.hpp"
#include "odirl/discriminator.hpp"
#include "odirl/env.hpp"
#include "odirl/experiment.hpp"

namespace fs = std::filesystem;
using namespace odirl;

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<double> alpha;
  std::optional<int> steps;
  bool flip_reward_sign = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "Seed override");
  cmd->add_option("--out", f.out, "Output directory override");
  cmd->add_option("--alpha", f.alpha, "DD weight (odirl only)");
  cmd->add_option("--steps", f.steps, "Outer iterations N");
  cmd->add_flag("--flip-reward-sign", f.flip_reward_sign, "Use log(1 - D) - log D as the policy reward");
}

harness::ExperimentConfig resolve(const CommonFlags& f) {
  auto c = harness::ExperimentConfig::load(f.config);
  if (f.seed) c.seed = *f.seed;
  if (f.out) c.output_dir = *f.out;
  if (f.alpha) c.alpha = *f.alpha;
  if (f.steps) c.steps = *f.steps;
  if (f.flip_reward_sign) c.flip_reward_sign = true;
  c.validate();
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  harness::init_logging();
  CLI::App app{"Off-dynamics inverse reinforcement learning"};
  app.require_subcommand(1);

  CommonFlags expert_f;
  auto* expert_cmd = app.add_subcommand("train-expert", "Train the source-domain expert on ground truth");
  add_common(expert_cmd, expert_f);

  CommonFlags demos_f;
  std::string demos_expert;
  auto* demos_cmd = app.add_subcommand("collect-demos", "Roll out the expert in the source domain");
  add_common(demos_cmd, demos_f);
  demos_cmd->add_option("--expert", demos_expert, "Expert checkpoint (defaults to expert_path)");

  CommonFlags run_f;
  std::string run_method, run_demos, run_expert;
  auto* run_cmd = app.add_subcommand("run", "Run odirl or a baseline");
  add_common(run_cmd, run_f);
  run_cmd->add_option("--method", run_method, "odirl, airl, airl_source_transfer, gail, expert_transfer");
  run_cmd->add_option("--demos", run_demos, "Demonstrations CSV (defaults to demos_path)");
  run_cmd->add_option("--expert", run_expert, "Expert checkpoint (defaults to expert_path)");

  CommonFlags ablate_f;
  std::vector<double> ablate_alphas{0.0, 0.5, 1.0, 2.0};
  std::string ablate_demos;
  auto* ablate_cmd = app.add_subcommand("ablate", "One odirl run per alpha");
  add_common(ablate_cmd, ablate_f);
  ablate_cmd->add_option("--alphas", ablate_alphas, "Alpha values")->delimiter(',');
  ablate_cmd->add_option("--demos", ablate_demos, "Demonstrations CSV (defaults to demos_path)");

  std::string heat_g, heat_out;
  int heat_n = 50;
  auto* heat_cmd = app.add_subcommand("heatmap", "Evaluate a state-only g checkpoint on a grid");
  heat_cmd->add_option("--checkpoint", heat_g, "g checkpoint")->required()->check(CLI::ExistingFile);
  heat_cmd->add_option("--out", heat_out, "Output CSV")->required();
  heat_cmd->add_option("--resolution", heat_n, "Cells per axis");

  std::vector<std::string> agg_dirs;
  std::string agg_out;
  auto* agg_cmd = app.add_subcommand("aggregate", "Per-method return bands across seeds");
  agg_cmd->add_option("runs", agg_dirs, "Run directories")->required();
  agg_cmd->add_option("--out", agg_out, "Output CSV")->required();

  CommonFlags eval_f;
  std::string eval_ckpt, eval_domain = "target", eval_traj;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a policy checkpoint");
  add_common(eval_cmd, eval_f);
  eval_cmd->add_option("--checkpoint", eval_ckpt, "Policy checkpoint")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--domain", eval_domain, "source or target");
  eval_cmd->add_option("--trajectories", eval_traj, "Write evaluation trajectories to this CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*expert_cmd) {
      auto c = resolve(expert_f);
      auto r = harness::train_expert(c);
      std::cout << "expert return " << r.final_return << " success " << r.final_success << " -> "
                << (fs::path(c.output_dir) / "expert.ckpt").string() << '\n';
    } else if (*demos_cmd) {
      auto c = resolve(demos_f);
      if (!demos_expert.empty()) c.expert_path = demos_expert;
      if (c.expert_path.empty()) throw Error("collect-demos: no expert checkpoint given");
      const auto pair = env::make_domain_pair(c.task, c.env);
      auto expert = policy::GaussianPolicy::load(c.expert_path, pair.spec());
      auto demos = harness::collect_demos(c, expert);
      std::cout << demos.trajectories().size() << " trajectories, " << demos.size() << " transitions -> "
                << (fs::path(c.output_dir) / "demos.csv").string() << '\n';
    } else if (*run_cmd) {
      auto c = resolve(run_f);
      if (!run_method.empty()) {
        c.method = harness::method_from_string(run_method);
        // The config file's alpha belongs to odirl; an explicit --alpha is still checked.
        if (c.method != harness::Method::kOdirl && !run_f.alpha) c.alpha.reset();
        c.validate();
      }
      if (!run_demos.empty()) c.demos_path = run_demos;
      if (!run_expert.empty()) c.expert_path = run_expert;
      auto r = harness::run(c);
      std::cout << harness::to_string(c.method) << " final return " << r.final_return << " success "
                << r.final_success << " source steps " << r.counts.source_steps << " -> " << r.output_dir
                << '\n';
    } else if (*ablate_cmd) {
      auto c = resolve(ablate_f);
      c.method = harness::Method::kOdirl;
      if (!ablate_demos.empty()) c.demos_path = ablate_demos;
      auto results = harness::run_ablation(c, ablate_alphas, harness::load_demos_for(c));
      for (std::size_t i = 0; i < results.size(); ++i) {
        std::cout << "alpha " << ablate_alphas[i] << " success " << results[i].final_success << " return "
                  << results[i].final_return << '\n';
      }
    } else if (*heat_cmd) {
      auto g = approx::Mlp::load(heat_g);
      irl::AirlDiscriminator disc(g, approx::Mlp::make(g.in_dim(), std::vector<int>{}, 1, approx::Activation::kRelu,
                                                       approx::Activation::kIdentity, 0, 1.0),
                                  1.0, true);
      irl::GridSpec grid;
      grid.nx = grid.ny = heat_n;
      irl::write_heatmap_csv(heat_out, irl::reward_heatmap(disc, grid));
    } else if (*agg_cmd) {
      auto rows = harness::aggregate(agg_dirs);
      harness::write_aggregate_csv(agg_out, rows);
      std::cout << rows.size() << " rows -> " << agg_out << '\n';
    } else if (*eval_cmd) {
      auto c = resolve(eval_f);
      const auto pair = env::make_domain_pair(c.task, c.env);
      auto pi = policy::GaussianPolicy::load(eval_ckpt, pair.spec());
      const Domain d = domain_from_string(eval_domain);
      Rng rng = make_stream(c.seed, "cli/eval");
      auto res = policy::evaluate(pi, pair.get(d), c.eval_episodes, rng, !eval_traj.empty());
      if (!eval_traj.empty()) {
        env::write_trajectories_csv(eval_traj, res.trajectories, pair.spec().state_dim, pair.spec().action_dim);
      }
      std::cout << "return " << res.mean_return << " success " << res.success_rate << '\n';
    }
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
