#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace odirl {

using Vec = Eigen::VectorXd;
// Batches are column-major: one sample per column.
using Mat = Eigen::MatrixXd;
using Rng = std::mt19937_64;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Domain : std::uint8_t { kSource, kTarget };

std::string_view to_string(Domain d);
Domain domain_from_string(std::string_view s);

// One environment step. `a` is the action as emitted by the policy; the
// environment clips it to bounds when stepping. `gt_reward` is for
// evaluation only and is never read by learning code.
struct Transition {
  Vec s;
  Vec a;
  Vec s_next;
  bool done = false;
  Domain domain = Domain::kSource;
  double gt_reward = 0.0;
};

using Trajectory = std::vector<Transition>;

struct TransitionBatch {
  Mat s;
  Mat a;
  Mat s_next;
  std::vector<std::uint8_t> done;

  Eigen::Index size() const { return s.cols(); }
};

TransitionBatch stack(std::span<const Transition> transitions);
TransitionBatch stack(std::span<const Trajectory> trajectories);

// Row-wise concatenation of equal-width blocks, used to build network inputs
// such as (s, a) and (s, a, s').
Mat vstack(std::initializer_list<const Mat*> blocks);

bool all_finite(const Vec& v);
bool all_finite(const Mat& m);

// Independent, reproducible RNG stream derived from a base seed and a label.
Rng make_stream(std::uint64_t seed, std::string_view label);

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace odirl
