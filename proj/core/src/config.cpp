#include "odirl/config.hpp"

#include <fstream>

namespace odirl::harness {

std::string to_string(Method m) {
  switch (m) {
    case Method::kOdirl: return "odirl";
    case Method::kAirl: return "airl";
    case Method::kAirlSourceTransfer: return "airl_source_transfer";
    case Method::kGail: return "gail";
    case Method::kExpertTransfer: return "expert_transfer";
  }
  return "odirl";
}

Method method_from_string(const std::string& s) {
  if (s == "odirl") return Method::kOdirl;
  if (s == "airl") return Method::kAirl;
  if (s == "airl_source_transfer") return Method::kAirlSourceTransfer;
  if (s == "gail") return Method::kGail;
  if (s == "expert_transfer") return Method::kExpertTransfer;
  throw Error("unknown method '" + s + "'");
}

double ExperimentConfig::effective_alpha() const {
  return method == Method::kOdirl ? alpha.value_or(1.0) : 0.0;
}

void ExperimentConfig::validate() const {
  if (task != "pointmaze" && task != "linkchain") throw Error("config: task must be pointmaze or linkchain");
  if (ratio < 1) throw Error("config: ratio r must be >= 1");
  if (steps < 1) throw Error("config: steps N must be >= 1");
  if (alpha && method != Method::kOdirl && *alpha != 0.0) {
    throw Error("config: alpha only applies to method odirl (got method " + to_string(method) + ")");
  }
  if (alpha && !(*alpha >= 0.0)) throw Error("config: alpha must be >= 0");
  if (policy_window_episodes < 1) throw Error("config: policy_window_episodes must be >= 1");
  if (eval_every < 1 || eval_episodes < 1) throw Error("config: eval cadence and episodes must be >= 1");
  if (target_capacity == 0 || source_capacity == 0) throw Error("config: buffer capacities must be positive");
  if (grad_steps_multiplier && *grad_steps_multiplier < 1) throw Error("config: grad_steps_multiplier must be >= 1");
  if (expert.iterations < 0 || expert.episodes_per_batch < 1 || expert.num_demos < 1) {
    throw Error("config: expert iterations/episodes/demos out of range");
  }
  policy.validate();
  disc.validate();
  dd.validate();
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["task"] = task;
  j["method"] = to_string(method);
  j["ratio"] = ratio;
  if (alpha) j["alpha"] = *alpha;
  j["steps"] = steps;
  j["seed"] = seed;
  j["seeds"] = seeds;
  j["env"] = env;
  j["policy_hidden"] = policy_hidden;
  j["init_log_std"] = init_log_std;
  j["policy"] = policy::to_json(policy);
  j["policy_window_episodes"] = policy_window_episodes;
  j["disc"] = irl::to_json(disc);
  auto ddj = dd::to_json(dd);
  ddj.erase("alpha");
  j["dd"] = ddj;
  j["classifier_hidden"] = classifier_hidden;
  j["target_capacity"] = target_capacity;
  j["source_capacity"] = source_capacity;
  j["eval_every"] = eval_every;
  j["eval_episodes"] = eval_episodes;
  j["checkpoint_every"] = checkpoint_every;
  if (grad_steps_multiplier) j["grad_steps_multiplier"] = *grad_steps_multiplier;
  j["flip_reward_sign"] = flip_reward_sign;
  j["poison_gt_reward"] = poison_gt_reward;
  j["demos_path"] = demos_path;
  j["expert_path"] = expert_path;
  j["output_dir"] = output_dir;
  j["expert"] = {{"iterations", expert.iterations},
                 {"episodes_per_batch", expert.episodes_per_batch},
                 {"init_log_std", expert.init_log_std},
                 {"opt", policy::to_json(expert.opt)},
                 {"num_demos", expert.num_demos},
                 {"stochastic_demos", expert.stochastic_demos}};
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    c.task = j.value("task", c.task);
    c.method = method_from_string(j.value("method", std::string("odirl")));
    // Interaction ratio defaults: 30 for the maze, 100 for the chain.
    c.ratio = j.value("ratio", c.task == "linkchain" ? 100 : 30);
    if (j.contains("alpha")) c.alpha = j.at("alpha").get<double>();
    c.steps = j.value("steps", c.steps);
    c.seed = j.value("seed", c.seed);
    c.seeds = j.value("seeds", c.seeds);
    c.env = j.value("env", nlohmann::json::object());
    c.policy_hidden = j.value("policy_hidden", c.policy_hidden);
    c.init_log_std = j.value("init_log_std", c.init_log_std);
    c.policy = policy::policy_opt_config_from_json(j.value("policy", nlohmann::json::object()));
    c.policy_window_episodes = j.value("policy_window_episodes", c.policy_window_episodes);
    c.disc = irl::discriminator_config_from_json(j.value("disc", nlohmann::json::object()));
    // The discriminator shares the policy's discount unless overridden.
    if (!j.value("disc", nlohmann::json::object()).contains("gamma")) c.disc.gamma = c.policy.gamma;
    c.dd = dd::dd_config_from_json(j.value("dd", nlohmann::json::object()));
    c.classifier_hidden = j.value("classifier_hidden", c.classifier_hidden);
    c.target_capacity = j.value("target_capacity", c.target_capacity);
    c.source_capacity = j.value("source_capacity", c.source_capacity);
    c.eval_every = j.value("eval_every", c.eval_every);
    c.eval_episodes = j.value("eval_episodes", c.eval_episodes);
    c.checkpoint_every = j.value("checkpoint_every", c.checkpoint_every);
    if (j.contains("grad_steps_multiplier")) c.grad_steps_multiplier = j.at("grad_steps_multiplier").get<int>();
    c.flip_reward_sign = j.value("flip_reward_sign", c.flip_reward_sign);
    c.poison_gt_reward = j.value("poison_gt_reward", c.poison_gt_reward);
    c.demos_path = j.value("demos_path", c.demos_path);
    c.expert_path = j.value("expert_path", c.expert_path);
    c.output_dir = j.value("output_dir", c.output_dir);
    const auto e = j.value("expert", nlohmann::json::object());
    c.expert.iterations = e.value("iterations", c.expert.iterations);
    c.expert.episodes_per_batch = e.value("episodes_per_batch", c.expert.episodes_per_batch);
    c.expert.init_log_std = e.value("init_log_std", c.expert.init_log_std);
    c.expert.opt = policy::policy_opt_config_from_json(e.value("opt", nlohmann::json::object()));
    c.expert.num_demos = e.value("num_demos", c.expert.num_demos);
    c.expert.stochastic_demos = e.value("stochastic_demos", c.expert.stochastic_demos);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::exception& e) {
    throw Error("config '" + path + "': " + e.what());
  }
  return from_json(j);
}

}  // namespace odirl::harness
