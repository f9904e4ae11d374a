#include "odirl/dd_classifiers.hpp"

#include <algorithm>
#include <cmath>

namespace odirl::dd {

void DDConfig::validate() const {
  if (!(alpha >= 0)) throw Error("dd config: alpha must be >= 0");
  if (!(input_noise_std >= 0)) throw Error("dd config: input_noise_std must be >= 0");
  if (!(learning_rate > 0) || batch_size < 1 || steps_per_iteration < 0) {
    throw Error("dd config: learning_rate, batch_size must be positive");
  }
}

DDConfig dd_config_from_json(const nlohmann::json& j, DDConfig c) {
  c.alpha = j.value("alpha", c.alpha);
  c.dd_clip = j.value("dd_clip", c.dd_clip);
  c.input_noise_std = j.value("input_noise_std", c.input_noise_std);
  c.learning_rate = j.value("learning_rate", c.learning_rate);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.steps_per_iteration = j.value("steps_per_iteration", c.steps_per_iteration);
  c.validate();
  return c;
}

nlohmann::json to_json(const DDConfig& c) {
  return {{"alpha", c.alpha},
          {"dd_clip", c.dd_clip},
          {"input_noise_std", c.input_noise_std},
          {"learning_rate", c.learning_rate},
          {"batch_size", c.batch_size},
          {"steps_per_iteration", c.steps_per_iteration}};
}

ClassifierPair ClassifierPair::make(int state_dim, int action_dim, const std::vector<int>& hidden,
                                    std::uint64_t seed) {
  using approx::Activation;
  ClassifierPair p;
  p.q_sas = approx::Mlp::make(2 * state_dim + action_dim, hidden, 2, Activation::kTanh,
                              Activation::kIdentity, seed);
  p.q_sa = approx::Mlp::make(state_dim + action_dim, hidden, 2, Activation::kTanh,
                             Activation::kIdentity, seed + 1);
  return p;
}

ClassifierPair ClassifierPair::swapped_labels() const {
  ClassifierPair p = *this;
  p.target_class = 1 - target_class;
  return p;
}

void ClassifierPair::validate() const {
  if (q_sas.out_dim() != 2 || q_sa.out_dim() != 2) throw Error("classifiers must emit exactly 2 logits");
  if (target_class != 0 && target_class != 1) throw Error("classifier target_class must be 0 or 1");
}

namespace {

// Column-wise log-softmax of 2-row logits.
Mat log_softmax2(const Mat& z) {
  Mat out(2, z.cols());
  for (Eigen::Index i = 0; i < z.cols(); ++i) {
    const double m = std::max(z(0, i), z(1, i));
    const double lse = m + std::log(std::exp(z(0, i) - m) + std::exp(z(1, i) - m));
    out(0, i) = z(0, i) - lse;
    out(1, i) = z(1, i) - lse;
  }
  return out;
}

void add_noise(Mat& m, double std, Rng* rng) {
  if (!rng || std <= 0) return;
  std::normal_distribution<double> n(0.0, std);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] += n(*rng);
}

struct Inputs {
  Mat sas;
  Mat sa;
};

Inputs make_inputs(const TransitionBatch& b) {
  return {vstack({&b.s, &b.a, &b.s_next}), vstack({&b.s, &b.a})};
}

// Both domains stacked column-wise; labels[i] = 1 for target samples.
struct Joint {
  Inputs x;
  std::vector<int> is_target;
};

Joint join(const TransitionBatch& source, const TransitionBatch& target) {
  if (source.size() == 0 || target.size() == 0) {
    throw Error("classifier_loss: both domains must be present in the batch");
  }
  Inputs xs = make_inputs(source);
  Inputs xt = make_inputs(target);
  Joint j;
  j.x.sas.resize(xs.sas.rows(), xs.sas.cols() + xt.sas.cols());
  j.x.sas << xs.sas, xt.sas;
  j.x.sa.resize(xs.sa.rows(), xs.sa.cols() + xt.sa.cols());
  j.x.sa << xs.sa, xt.sa;
  j.is_target.assign(static_cast<std::size_t>(source.size()), 0);
  j.is_target.resize(static_cast<std::size_t>(source.size() + target.size()), 1);
  return j;
}

// Mean NLL of the true domain, averaged within each domain then summed over
// the two domains (matches l = -E_target[log q(target)] - E_source[log q(source)]).
double nll_and_grad(const Mat& logits, const std::vector<int>& is_target, int target_class,
                    Eigen::Index n_src, Eigen::Index n_tgt, Mat* grad, double* accuracy) {
  const Mat lp = log_softmax2(logits);
  double loss = 0.0;
  int correct = 0;
  if (grad) grad->resize(2, logits.cols());
  for (Eigen::Index i = 0; i < logits.cols(); ++i) {
    const bool tgt = is_target[static_cast<std::size_t>(i)] != 0;
    const int label = tgt ? target_class : 1 - target_class;
    const double w = 1.0 / static_cast<double>(tgt ? n_tgt : n_src);
    loss -= w * lp(label, i);
    const int predicted = lp(1, i) > lp(0, i) ? 1 : 0;
    correct += predicted == label ? 1 : 0;
    if (grad) {
      for (int c = 0; c < 2; ++c) (*grad)(c, i) = w * (std::exp(lp(c, i)) - (c == label ? 1.0 : 0.0));
    }
  }
  if (accuracy) *accuracy = static_cast<double>(correct) / static_cast<double>(logits.cols());
  // Reported as a per-domain mean so uniform logits give ln 2 per classifier.
  return 0.5 * loss;
}

}  // namespace

ClassifierLoss classifier_loss(ClassifierPair& pair, const TransitionBatch& source_batch,
                               const TransitionBatch& target_batch, double noise_std, Rng* rng) {
  pair.validate();
  Joint j = join(source_batch, target_batch);
  add_noise(j.x.sas, noise_std, rng);
  add_noise(j.x.sa, noise_std, rng);
  const Eigen::Index ns = source_batch.size();
  const Eigen::Index nt = target_batch.size();
  ClassifierLoss out;
  Mat g;
  out.sas = nll_and_grad(pair.q_sas.forward(j.x.sas), j.is_target, pair.target_class, ns, nt, &g,
                         &out.accuracy_sas);
  pair.q_sas.backward(0.5 * g);
  out.sa = nll_and_grad(pair.q_sa.forward(j.x.sa), j.is_target, pair.target_class, ns, nt, &g,
                        &out.accuracy_sa);
  pair.q_sa.backward(0.5 * g);
  return out;
}

ClassifierLoss classifier_metrics(const ClassifierPair& pair, const TransitionBatch& source_batch,
                                  const TransitionBatch& target_batch) {
  pair.validate();
  Joint j = join(source_batch, target_batch);
  const Eigen::Index ns = source_batch.size();
  const Eigen::Index nt = target_batch.size();
  ClassifierLoss out;
  out.sas = nll_and_grad(pair.q_sas.predict(j.x.sas), j.is_target, pair.target_class, ns, nt, nullptr,
                         &out.accuracy_sas);
  out.sa = nll_and_grad(pair.q_sa.predict(j.x.sa), j.is_target, pair.target_class, ns, nt, nullptr,
                        &out.accuracy_sa);
  return out;
}

Vec dd_raw(const ClassifierPair& pair, const TransitionBatch& batch) {
  pair.validate();
  Inputs x = make_inputs(batch);
  const Mat lp_sas = log_softmax2(pair.q_sas.predict(x.sas));
  const Mat lp_sa = log_softmax2(pair.q_sa.predict(x.sa));
  const int t = pair.target_class;
  const int s = 1 - t;
  Vec out(batch.size());
  for (Eigen::Index i = 0; i < batch.size(); ++i) {
    out[i] = (lp_sas(t, i) - lp_sas(s, i)) - (lp_sa(t, i) - lp_sa(s, i));
  }
  return out;
}

Vec dd_values(const ClassifierPair& pair, const TransitionBatch& batch, const DDConfig& config) {
  Vec raw = dd_raw(pair, batch);
  if (config.dd_clip > 0) raw = raw.cwiseMax(-config.dd_clip).cwiseMin(config.dd_clip);
  return config.alpha * raw;
}

double dd_value(const ClassifierPair& pair, const Vec& s, const Vec& a, const Vec& s_next,
                const DDConfig& config) {
  TransitionBatch b;
  b.s = s;
  b.a = a;
  b.s_next = s_next;
  b.done = {0};
  return dd_values(pair, b, config)[0];
}

DDEstimator::DDEstimator(ClassifierPair pair, DDConfig config)
    : pair_(std::move(pair)),
      config_(config),
      sas_opt_(pair_.q_sas.num_params(), {config.learning_rate}),
      sa_opt_(pair_.q_sa.num_params(), {config.learning_rate}) {
  config_.validate();
  pair_.validate();
}

ClassifierLoss DDEstimator::train_step(const TransitionBatch& source_batch,
                                       const TransitionBatch& target_batch, Rng& rng) {
  ClassifierLoss l = classifier_loss(pair_, source_batch, target_batch, config_.input_noise_std, &rng);
  sas_opt_.step(pair_.q_sas);
  sa_opt_.step(pair_.q_sa);
  return l;
}

}  // namespace odirl::dd
