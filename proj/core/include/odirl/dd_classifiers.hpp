#pragma once

#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "odirl/mlp.hpp"

namespace odirl::dd {

struct DDConfig {
  double alpha = 1.0;
  double dd_clip = 5.0;  // <= 0 disables the clamp
  double input_noise_std = 0.01;
  double learning_rate = 3e-4;
  int batch_size = 128;  // per domain
  int steps_per_iteration = 1;

  void validate() const;
};

DDConfig dd_config_from_json(const nlohmann::json& j, DDConfig base = {});
nlohmann::json to_json(const DDConfig& c);

// Two domain classifiers emitting 2-class logits. Row `target_class` is the
// target domain; the other row is the source domain.
struct ClassifierPair {
  approx::Mlp q_sas;  // (s, a, s') -> logits
  approx::Mlp q_sa;   // (s, a) -> logits
  int target_class = 1;

  static ClassifierPair make(int state_dim, int action_dim, const std::vector<int>& hidden,
                             std::uint64_t seed);
  // Same networks with the class labels exchanged.
  ClassifierPair swapped_labels() const;
  void validate() const;
};

struct ClassifierLoss {
  double sas = 0.0;
  double sa = 0.0;
  double total() const { return sas + sa; }
  double accuracy_sas = 0.0;
  double accuracy_sa = 0.0;
};

// l = l_SAS + l_SA, each the mean negative log-probability of the true domain
// over both batches. Gradients are accumulated into both networks. Inputs are
// perturbed with N(0, noise_std^2) when `rng` is non-null and noise_std > 0.
ClassifierLoss classifier_loss(ClassifierPair& pair, const TransitionBatch& source_batch,
                               const TransitionBatch& target_batch, double noise_std = 0.0,
                               Rng* rng = nullptr);

// Forward-only loss/accuracy, e.g. on held-out data.
ClassifierLoss classifier_metrics(const ClassifierPair& pair, const TransitionBatch& source_batch,
                                  const TransitionBatch& target_batch);

// alpha * clamp([log q_sas(tgt) - log q_sas(src)] - [log q_sa(tgt) - log q_sa(src)], +-dd_clip)
double dd_value(const ClassifierPair& pair, const Vec& s, const Vec& a, const Vec& s_next,
                const DDConfig& config);
Vec dd_values(const ClassifierPair& pair, const TransitionBatch& batch, const DDConfig& config);
// Unscaled, unclamped estimate of log p_target(s'|s,a) - log p_source(s'|s,a).
Vec dd_raw(const ClassifierPair& pair, const TransitionBatch& batch);

// Owns the classifier optimizer state.
class DDEstimator {
 public:
  DDEstimator(ClassifierPair pair, DDConfig config);

  // One optimizer step on both classifiers.
  ClassifierLoss train_step(const TransitionBatch& source_batch, const TransitionBatch& target_batch,
                            Rng& rng);

  const ClassifierPair& pair() const { return pair_; }
  ClassifierPair& mutable_pair() { return pair_; }
  const DDConfig& config() const { return config_; }

 private:
  ClassifierPair pair_;
  DDConfig config_;
  approx::Adam sas_opt_;
  approx::Adam sa_opt_;
};

}  // namespace odirl::dd
