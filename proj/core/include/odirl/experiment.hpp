#pragma once

#include <optional>
#include <string>
#include <vector>

#include "odirl/config.hpp"
#include "odirl/demos.hpp"
#include "odirl/gaussian_policy.hpp"

namespace odirl::harness {

// One line of progress.csv. Unset fields are written as empty cells.
struct ProgressRow {
  int iteration = 0;
  long target_steps = 0;
  long source_steps = 0;
  std::optional<double> disc_loss;
  std::optional<double> classifier_loss;
  std::optional<double> mean_dd;
  std::optional<double> policy_entropy;
  std::optional<double> gt_return;
  std::optional<double> success_rate;
};

inline constexpr const char* kProgressHeader =
    "iteration,target_steps,source_steps,disc_loss,classifier_loss,mean_dd,policy_entropy,gt_return,"
    "success_rate";

std::string format_progress_row(const ProgressRow& row);

struct InteractionCounts {
  long target_steps = 0;
  long source_steps = 0;
  long target_rollouts = 0;
  long source_rollouts = 0;
  long classifier_updates = 0;
  long disc_updates = 0;
  long policy_updates = 0;
};

struct RunResult {
  std::string output_dir;
  std::vector<ProgressRow> rows;
  InteractionCounts counts;
  double final_return = 0.0;
  double final_success = 0.0;
  std::optional<policy::GaussianPolicy> policy;
};

struct ExpertResult {
  policy::GaussianPolicy policy;
  double final_return = 0.0;
  double final_success = 0.0;
};

// Trains the source-domain expert against the ground-truth reward and writes
// <output_dir>/expert.ckpt.
ExpertResult train_expert(const ExperimentConfig& config);

// Expert rollouts in the source domain, written to <output_dir>/demos.csv.
buffers::DemoSet collect_demos(const ExperimentConfig& config, const policy::GaussianPolicy& expert);

// The adversarial loop: per iteration a target rollout, a source rollout every
// r-th iteration, a classifier update, DD on demos, a discriminator update and
// a MaxEnt policy update. With alpha = 0 this is exactly the AIRL baseline.
RunResult run_odirl(const ExperimentConfig& config, const buffers::DemoSet& demos);

// airl, gail, airl_source_transfer or expert_transfer.
RunResult run_baseline(const ExperimentConfig& config, const std::optional<buffers::DemoSet>& demos);

// Dispatches on config.method, loading demos from config.demos_path when needed.
RunResult run(const ExperimentConfig& config);
RunResult run(const ExperimentConfig& config, const buffers::DemoSet& demos);

// One odirl run per alpha under <output_dir>/alpha_<value>.
std::vector<RunResult> run_ablation(const ExperimentConfig& config, const std::vector<double>& alphas,
                                    const buffers::DemoSet& demos);

std::string alpha_dir_name(double alpha);

buffers::DemoSet load_demos_for(const ExperimentConfig& config);

// Per-method, per-iteration mean/min/max of the ground-truth return across
// the given run directories. Throws when seeds of one method disagree on the
// evaluation grid.
struct AggregateRow {
  std::string method;
  int iteration = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
  double success_mean = 0.0;
  int num_runs = 0;
};
std::vector<AggregateRow> aggregate(const std::vector<std::string>& run_dirs);
void write_aggregate_csv(const std::string& path, const std::vector<AggregateRow>& rows);

// Sets the spdlog level from ODIRL_LOG_LEVEL (trace/debug/info/warn/error/off).
void init_logging();

}  // namespace odirl::harness
