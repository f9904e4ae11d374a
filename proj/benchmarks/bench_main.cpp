#include <random>

#include <benchmark/benchmark.h>

#include "odirl/dd_classifiers.hpp"
#include "odirl/discriminator.hpp"
#include "odirl/env.hpp"
#include "odirl/gaussian_policy.hpp"
#include "odirl/mlp.hpp"

namespace {

using namespace odirl;

Mat random_mat(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat m(rows, cols);
  for (auto& v : m.reshaped()) v = u(rng);
  return m;
}

TransitionBatch random_batch(int state_dim, int action_dim, int n, Rng& rng) {
  return {random_mat(state_dim, n, rng), random_mat(action_dim, n, rng), random_mat(state_dim, n, rng),
          std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0)};
}

void BM_MlpForward(benchmark::State& state) {
  const auto batch = static_cast<Eigen::Index>(state.range(0));
  auto net = approx::Mlp::make(4, {64, 64}, 1, approx::Activation::kTanh, approx::Activation::kIdentity, 0);
  Rng rng(1);
  const Mat x = random_mat(4, batch, rng);
  for (auto _ : state) benchmark::DoNotOptimize(net.predict(x));
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_MlpForward)->Arg(1)->Arg(64)->Arg(256);

void BM_MlpForwardBackward(benchmark::State& state) {
  const auto batch = static_cast<Eigen::Index>(state.range(0));
  auto net = approx::Mlp::make(4, {64, 64}, 1, approx::Activation::kTanh, approx::Activation::kIdentity, 0);
  Rng rng(2);
  const Mat x = random_mat(4, batch, rng);
  const Mat up = Mat::Ones(1, batch);
  for (auto _ : state) {
    net.zero_grad();
    net.forward(x);
    benchmark::DoNotOptimize(net.backward(up));
  }
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_MlpForwardBackward)->Arg(64)->Arg(256);

void BM_EnvStep(benchmark::State& state, const char* task) {
  const auto pair = env::make_domain_pair(task, nlohmann::json::object());
  const env::Environment& target = *pair.target;
  Rng rng(3);
  Vec s = target.reset(rng);
  const Vec a = Vec::Constant(target.spec().action_dim, 0.3);
  for (auto _ : state) {
    auto r = target.step(s, a, rng);
    s = r.done ? target.reset(rng) : r.next_state;
    benchmark::DoNotOptimize(s.data());
  }
}
BENCHMARK_CAPTURE(BM_EnvStep, pointmaze, "pointmaze");
BENCHMARK_CAPTURE(BM_EnvStep, linkchain, "linkchain");

void BM_DDValues(benchmark::State& state) {
  const auto n = static_cast<int>(state.range(0));
  auto pair = dd::ClassifierPair::make(2, 2, {64, 64}, 4);
  Rng rng(5);
  const auto batch = random_batch(2, 2, n, rng);
  const dd::DDConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(dd::dd_values(pair, batch, cfg));
  state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_DDValues)->Arg(256);

void BM_DiscriminatorUpdate(benchmark::State& state) {
  const int n = 256;
  irl::DiscriminatorConfig cfg;
  irl::AirlTrainer trainer(irl::AirlDiscriminator::make(2, 2, cfg, 6), cfg);
  Rng rng(7);
  const auto demo = random_batch(2, 2, n, rng);
  const auto pol = random_batch(2, 2, n, rng);
  const Vec zeros = Vec::Zero(n);
  for (auto _ : state) benchmark::DoNotOptimize(trainer.update(demo, zeros, zeros, pol, zeros));
}
BENCHMARK(BM_DiscriminatorUpdate);

void BM_PolicySample(benchmark::State& state) {
  const auto pair = env::make_domain_pair("pointmaze", nlohmann::json::object());
  auto pi = policy::GaussianPolicy::make(pair.spec(), {64, 64}, 8);
  Rng rng(9);
  const Vec s = Vec::Constant(2, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(pi.sample_action(s, rng));
}
BENCHMARK(BM_PolicySample);

}  // namespace
BENCHMARK_MAIN();
