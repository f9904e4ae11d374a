#include <algorithm>

#include "odirl/discriminator.hpp"

namespace odirl::irl {

GailDiscriminator GailDiscriminator::make(int state_dim, int action_dim, const std::vector<int>& hidden,
                                          std::uint64_t seed) {
  return GailDiscriminator(approx::Mlp::make(state_dim + action_dim, hidden, 1, approx::Activation::kTanh,
                                             approx::Activation::kIdentity, seed));
}

Vec GailDiscriminator::logits(const TransitionBatch& batch) const {
  return d_.predict(vstack({&batch.s, &batch.a})).row(0).transpose();
}

DiscLoss GailDiscriminator::gail_disc_loss(const TransitionBatch& demo, const TransitionBatch& policy,
                                           double logit_clamp) {
  const Eigen::Index ne = demo.size();
  const Eigen::Index np = policy.size();
  if (ne == 0 || np == 0) throw Error("gail_disc_loss: empty batch");
  const Mat xe = vstack({&demo.s, &demo.a});
  const Mat xp = vstack({&policy.s, &policy.a});
  Mat x(xe.rows(), ne + np);
  x << xe, xp;
  const Mat& z_all = d_.forward(x);
  DiscLoss out;
  Mat dz(1, ne + np);
  for (Eigen::Index i = 0; i < ne + np; ++i) {
    const double z = std::clamp(z_all(0, i), -logit_clamp, logit_clamp);
    if (i < ne) {
      out.loss += softplus(-z) / static_cast<double>(ne);
      dz(0, i) = -sigmoid(-z) / static_cast<double>(ne);
      out.demo_accuracy += z > 0 ? 1.0 : 0.0;
    } else {
      out.loss += softplus(z) / static_cast<double>(np);
      dz(0, i) = sigmoid(z) / static_cast<double>(np);
      out.policy_accuracy += z < 0 ? 1.0 : 0.0;
    }
  }
  out.demo_accuracy /= static_cast<double>(ne);
  out.policy_accuracy /= static_cast<double>(np);
  d_.backward(dz);
  return out;
}

Vec GailDiscriminator::gail_policy_reward(const TransitionBatch& batch, double logit_clamp) const {
  Vec z = logits(batch).cwiseMax(-logit_clamp).cwiseMin(logit_clamp);
  return z.unaryExpr([](double v) { return softplus(v); });
}

GailTrainer::GailTrainer(GailDiscriminator disc, DiscriminatorConfig config)
    : disc_(std::move(disc)), config_(std::move(config)), opt_(disc_.d_net().num_params(), {config_.learning_rate}) {
  config_.validate();
}

DiscLoss GailTrainer::update(const TransitionBatch& demo, const TransitionBatch& policy) {
  DiscLoss l = disc_.gail_disc_loss(demo, policy, config_.logit_clamp);
  opt_.step(disc_.d_net());
  return l;
}

}  // namespace odirl::irl
