#pragma once

#include <string>
#include <vector>

#include "odirl/env.hpp"

namespace odirl::buffers {

struct DemoMetadata {
  std::string env_config_hash;
  std::uint64_t expert_seed = 0;
  int horizon = 0;
};

// Expert trajectories from the source domain. Immutable once built.
class DemoSet {
 public:
  DemoSet(std::vector<Trajectory> trajectories, DemoMetadata metadata);

  const std::vector<Trajectory>& trajectories() const { return trajectories_; }
  const std::vector<Transition>& transitions() const { return flat_; }
  const DemoMetadata& metadata() const { return metadata_; }
  std::size_t size() const { return flat_.size(); }

  TransitionBatch sample_batch(std::size_t n, Rng& rng) const;

 private:
  std::vector<Trajectory> trajectories_;
  std::vector<Transition> flat_;
  DemoMetadata metadata_;
};

// One JSON metadata line, then the trajectory CSV. Numbers use 17 significant
// digits so a round trip is value-exact.
void save_demos(const std::string& path, const DemoSet& demos, int state_dim, int action_dim);

struct LoadedDemos {
  DemoSet demos;
  std::vector<std::string> warnings;
};

// Validates column count and dimensions against `spec`, naming the offending
// row on failure. A hash different from `expected_hash` (when non-empty) is
// reported as a warning and the load proceeds.
LoadedDemos load_demos(const std::string& path, const env::EnvSpec& spec,
                       const std::string& expected_hash = "");

}  // namespace odirl::buffers
