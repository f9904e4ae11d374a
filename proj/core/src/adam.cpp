#include <cmath>

#include "odirl/mlp.hpp"

namespace odirl::approx {

Adam::Adam(std::size_t n, AdamConfig config) : config_(config), m_(n, 0.0), v_(n, 0.0) {}

void Adam::step(std::span<double> params, std::span<double> grad) {
  if (params.size() != m_.size() || grad.size() != m_.size()) {
    throw Error("adam: parameter/gradient size does not match optimizer state");
  }
  double sq = 0.0;
  for (double g : grad) {
    if (!std::isfinite(g)) throw Error("adam: non-finite gradient (training diverged)");
    sq += g * g;
  }
  double norm = std::sqrt(sq);
  double scale = 1.0;
  if (config_.clip_norm > 0.0 && norm > config_.clip_norm) {
    scale = config_.clip_norm / norm;
    norm = config_.clip_norm;
  }
  last_norm_ = norm;
  ++t_;
  const double b1 = config_.beta1;
  const double b2 = config_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grad[i] * scale;
    m_[i] = b1 * m_[i] + (1.0 - b1) * g;
    v_[i] = b2 * v_[i] + (1.0 - b2) * g * g;
    params[i] -= config_.learning_rate * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + config_.epsilon);
    grad[i] = 0.0;
  }
}

void Adam::step(Mlp& net) { step(net.mutable_params(), net.mutable_grad()); }

}  // namespace odirl::approx
