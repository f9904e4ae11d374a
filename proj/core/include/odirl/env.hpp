#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "odirl/types.hpp"

namespace odirl::env {

// State/action spaces and the shared initial-state distribution of a task.
struct EnvSpec {
  int state_dim = 0;
  int action_dim = 0;
  Vec action_low;
  Vec action_high;
  int horizon = 1;
  Vec goal;  // point in the space returned by Environment::position()
  double goal_radius = 0.0;
};

struct StepResult {
  Vec next_state;
  bool done = false;
};

// Environments hold configuration only; the state is passed in and out, so a
// single instance can be shared read-only by independent rollouts.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual const EnvSpec& spec() const = 0;
  virtual Domain domain() const = 0;
  virtual std::string task_name() const = 0;

  virtual Vec reset(Rng& rng) const = 0;
  // The action is clipped to the EnvSpec action bounds. Throws Error on non-finite state.
  virtual StepResult step(const Vec& state, const Vec& action, Rng& rng) const = 0;

  // Task-space point used by ground-truth reward and success checks.
  virtual Vec position(const Vec& state) const = 0;
  virtual double ground_truth_reward(const Vec& state) const;
  virtual bool in_goal(const Vec& state) const;

  // Canonical configuration, used for hashing and copying into run directories.
  virtual nlohmann::json config_json() const = 0;
  std::string config_hash() const;

 protected:
  Vec clip_action(const Vec& action) const;
};

// -(distance from the task-space position to the goal).
double ground_truth_reward(const Environment& env, const Vec& state);

// Source and target members share state/action spaces and p(s0).
struct DomainPair {
  std::shared_ptr<const Environment> source;
  std::shared_ptr<const Environment> target;

  const Environment& get(Domain d) const { return d == Domain::kSource ? *source : *target; }
  const EnvSpec& spec() const { return source->spec(); }
  // Hash over both members; demos recorded against a different pair warn on load.
  std::string config_hash() const;
};

void validate_pair(const DomainPair& pair);

// Builds the pair for `task` ("pointmaze" or "linkchain") from its config
// section; missing keys fall back to defaults.
DomainPair make_domain_pair(const std::string& task, const nlohmann::json& cfg);

// Returns the action for `state`; environments clip it to bounds.
using PolicyFn = std::function<Vec(const Vec& state, Rng& rng)>;

struct RolloutOptions {
  // Stores NaN as gt_reward; used to show learning never reads it.
  bool poison_gt_reward = false;
};

// At most `horizon` transitions, stopping early on done. Each transition is
// tagged with env.domain().
Trajectory rollout(const PolicyFn& policy, const Environment& env, int horizon, Rng& rng,
                   const RolloutOptions& options = {});

// CSV with header s_0..s_{d-1},a_0..,s_next_0..,done,domain_tag.
std::string trajectory_csv_header(int state_dim, int action_dim);
void write_transition_row(std::ostream& os, const Transition& t);
void write_trajectories_csv(std::ostream& os, std::span<const Trajectory> trajectories,
                            int state_dim, int action_dim);
void write_trajectories_csv(const std::string& path, std::span<const Trajectory> trajectories,
                            int state_dim, int action_dim);

}  // namespace odirl::env
