#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "odirl/dd_classifiers.hpp"
#include "odirl/discriminator.hpp"
#include "odirl/ppo.hpp"

namespace odirl::harness {

enum class Method { kOdirl, kAirl, kAirlSourceTransfer, kGail, kExpertTransfer };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct ExpertConfig {
  int iterations = 300;
  int episodes_per_batch = 16;
  double init_log_std = 0.0;
  policy::PolicyOptConfig opt;
  int num_demos = 20;
  bool stochastic_demos = true;
};

struct ExperimentConfig {
  std::string task = "pointmaze";
  Method method = Method::kOdirl;
  int ratio = 30;  // target rollouts per source rollout
  std::optional<double> alpha;  // odirl only
  int steps = 300;  // N, outer iterations
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> seeds{0, 1, 2};
  nlohmann::json env = nlohmann::json::object();

  std::vector<int> policy_hidden{64, 64};
  double init_log_std = 0.0;
  policy::PolicyOptConfig policy;
  int policy_window_episodes = 16;

  irl::DiscriminatorConfig disc;
  dd::DDConfig dd;
  std::vector<int> classifier_hidden{64, 64};

  std::size_t target_capacity = 1000000;
  std::size_t source_capacity = 100000;

  int eval_every = 10;
  int eval_episodes = 20;
  int checkpoint_every = 0;  // 0: final checkpoint only

  std::optional<int> grad_steps_multiplier;  // airl_source_transfer; defaults to ratio
  bool flip_reward_sign = false;
  bool poison_gt_reward = false;

  std::string demos_path;
  std::string expert_path;
  std::string output_dir = "runs/default";

  ExpertConfig expert;

  double effective_alpha() const;
  int effective_grad_multiplier() const { return grad_steps_multiplier.value_or(ratio); }

  void validate() const;
  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::string& path);
};

}  // namespace odirl::harness
