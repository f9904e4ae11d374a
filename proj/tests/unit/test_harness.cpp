#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "odirl/config.hpp"
#include "odirl/experiment.hpp"

namespace odirl::harness {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

int count_lines(const fs::path& p) {
  std::ifstream is(p);
  std::string line;
  int n = 0;
  while (std::getline(is, line)) ++n;
  return n;
}

class HarnessTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() / ("odirl_harness_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  // Tiny networks and short episodes so whole runs take well under a second.
  nlohmann::json small_json(const std::string& method, const std::string& out) const {
    return {{"task", "pointmaze"},
            {"method", method},
            {"ratio", 3},
            {"steps", 7},
            {"seed", 4},
            {"env", {{"horizon", 12}}},
            {"policy_hidden", {8}},
            {"classifier_hidden", {8}},
            {"policy", {{"epochs", 2}, {"minibatch_size", 32}}},
            {"policy_window_episodes", 4},
            {"disc", {{"hidden", {8}}, {"batch_size", 16}}},
            {"dd", {{"batch_size", 16}}},
            {"eval_every", 3},
            {"eval_episodes", 2},
            {"output_dir", (root_ / out).string()}};
  }

  ExperimentConfig small(const std::string& method, const std::string& out) const {
    return ExperimentConfig::from_json(small_json(method, out));
  }

  // Scripted source-domain demonstrations: down, across under the wall, up.
  // Actions stay inside the box so log pi of the demos is moderate.
  buffers::DemoSet demos() const {
    auto pair = env::make_domain_pair("pointmaze", {{"horizon", 12}});
    env::PolicyFn scripted = [](const Vec& s, Rng&) {
      Vec a(2);
      if (s[0] < 0.6 && s[1] > 0.4) a << 0.1, -0.8;
      else if (s[0] < 0.85) a << 0.8, 0.1;
      else a << 0.1, 0.8;
      return a;
    };
    Rng rng(0);
    std::vector<Trajectory> trajs;
    for (int i = 0; i < 5; ++i) trajs.push_back(env::rollout(scripted, *pair.source, 12, rng));
    return buffers::DemoSet(std::move(trajs), {pair.config_hash(), 0, 12});
  }

  fs::path root_;
};

TEST_F(HarnessTest, ConfigValidation) {
  auto j = small_json("airl", "x");
  j["alpha"] = 1.0;
  EXPECT_THROW(ExperimentConfig::from_json(j), Error);
  j["alpha"] = 0.0;
  EXPECT_NO_THROW(ExperimentConfig::from_json(j));
  j = small_json("odirl", "x");
  j["ratio"] = 0;
  EXPECT_THROW(ExperimentConfig::from_json(j), Error);
  j = small_json("odirl", "x");
  j["steps"] = 0;
  EXPECT_THROW(ExperimentConfig::from_json(j), Error);
  j = small_json("dagger", "x");
  EXPECT_THROW(ExperimentConfig::from_json(j), Error);
  j = small_json("odirl", "x");
  j["task"] = "halfcheetah";
  EXPECT_THROW(ExperimentConfig::from_json(j), Error);
  j = small_json("odirl", "x");
  j["alpha"] = -0.5;
  EXPECT_THROW(ExperimentConfig::from_json(j), Error);
}

TEST_F(HarnessTest, DefaultRatios) {
  EXPECT_EQ(ExperimentConfig::from_json({{"task", "pointmaze"}}).ratio, 30);
  EXPECT_EQ(ExperimentConfig::from_json({{"task", "linkchain"}}).ratio, 100);
}

TEST_F(HarnessTest, ConfigRoundTripsThroughJson) {
  auto c = small("odirl", "x");
  c.alpha = 0.5;
  auto back = ExperimentConfig::from_json(c.to_json());
  EXPECT_EQ(back.to_json(), c.to_json());
}

TEST_F(HarnessTest, SingleIterationRunsEveryPhaseOnce) {
  auto c = small("odirl", "n1");
  c.steps = 1;
  auto r = run_odirl(c, demos());
  EXPECT_EQ(r.counts.target_rollouts, 1);
  EXPECT_EQ(r.counts.source_rollouts, 1);
  EXPECT_EQ(r.counts.classifier_updates, 1);
  EXPECT_EQ(r.counts.disc_updates, 1);
  EXPECT_EQ(r.counts.policy_updates, 1);
  ASSERT_EQ(r.rows.size(), 1u);
  const auto& row = r.rows[0];
  EXPECT_TRUE(row.disc_loss && row.classifier_loss && row.mean_dd && row.policy_entropy && row.gt_return &&
              row.success_rate);
  const fs::path dir = r.output_dir;
  EXPECT_EQ(count_lines(dir / "progress.csv"), 2);
  EXPECT_EQ(count_lines(dir / "diagnostics.csv"), 2);
  for (const char* f : {"config.json", "summary.json", "heatmap.csv", "eval_target.csv", "eval_source.csv",
                        "checkpoints/policy.ckpt", "checkpoints/g.ckpt", "checkpoints/h.ckpt",
                        "checkpoints/q_sas.ckpt", "checkpoints/q_sa.ckpt"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  const std::string header = slurp(dir / "progress.csv").substr(0, std::string(kProgressHeader).size());
  EXPECT_EQ(header, kProgressHeader);
}

TEST_F(HarnessTest, SourceRolloutEveryRthIteration) {
  auto c = small("odirl", "r30");
  c.ratio = 30;
  c.steps = 300;
  c.eval_every = 100;
  c.policy.epochs = 1;
  auto r = run_odirl(c, demos());
  EXPECT_EQ(r.counts.target_rollouts, 300);
  EXPECT_EQ(r.counts.source_rollouts, 10);
  EXPECT_LE(r.counts.source_steps, 10L * 12L);
  EXPECT_EQ(r.rows.back().source_steps, r.counts.source_steps);
  EXPECT_EQ(r.rows.back().target_steps, r.counts.target_steps);
}

TEST_F(HarnessTest, ZeroAlphaReproducesAirl) {
  const auto d = demos();
  auto o = small("odirl", "odirl0");
  o.alpha = 0.0;
  auto a = small("airl", "airl");
  auto ro = run_odirl(o, d);
  auto ra = run(a, d);
  EXPECT_EQ(slurp(fs::path(ro.output_dir) / "progress.csv"), slurp(fs::path(ra.output_dir) / "progress.csv"));
  EXPECT_EQ(slurp(fs::path(ro.output_dir) / "checkpoints/g.ckpt"), slurp(fs::path(ra.output_dir) / "checkpoints/g.ckpt"));
  EXPECT_EQ(slurp(fs::path(ro.output_dir) / "checkpoints/policy.ckpt"),
            slurp(fs::path(ra.output_dir) / "checkpoints/policy.ckpt"));
  // A nonzero alpha takes a different path.
  auto o1 = small("odirl", "odirl1");
  o1.alpha = 1.0;
  auto r1 = run_odirl(o1, d);
  EXPECT_NE(slurp(fs::path(r1.output_dir) / "progress.csv"), slurp(fs::path(ra.output_dir) / "progress.csv"));
}

TEST_F(HarnessTest, RepeatedRunsAreIdentical) {
  const auto d = demos();
  auto r1 = run_odirl(small("odirl", "a"), d);
  auto r2 = run_odirl(small("odirl", "b"), d);
  for (const char* f : {"progress.csv", "diagnostics.csv", "heatmap.csv", "checkpoints/policy.ckpt"}) {
    EXPECT_EQ(slurp(fs::path(r1.output_dir) / f), slurp(fs::path(r2.output_dir) / f)) << f;
  }
  auto c = small("odirl", "c");
  c.seed = 5;
  auto r3 = run_odirl(c, d);
  EXPECT_NE(slurp(fs::path(r1.output_dir) / "progress.csv"), slurp(fs::path(r3.output_dir) / "progress.csv"));
}

TEST_F(HarnessTest, PoisonedGroundTruthDoesNotChangeLearning) {
  const auto d = demos();
  auto clean = run_odirl(small("odirl", "clean"), d);
  auto p = small("odirl", "poisoned");
  p.poison_gt_reward = true;
  auto poisoned = run_odirl(p, d);
  for (const char* f : {"checkpoints/policy.ckpt", "checkpoints/g.ckpt", "checkpoints/h.ckpt",
                        "checkpoints/q_sas.ckpt", "checkpoints/value.ckpt", "progress.csv"}) {
    EXPECT_EQ(slurp(fs::path(clean.output_dir) / f), slurp(fs::path(poisoned.output_dir) / f)) << f;
  }
}

TEST_F(HarnessTest, ExpertTransferWritesOneRow) {
  auto pair = env::make_domain_pair("pointmaze", {{"horizon", 12}});
  auto expert = policy::GaussianPolicy::make(pair.spec(), {8}, 1);
  const fs::path ckpt = root_ / "expert.ckpt";
  expert.save(ckpt.string());
  auto c = small("expert_transfer", "et");
  c.expert_path = ckpt.string();
  auto r = run(c);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_EQ(r.rows[0].iteration, 0);
  EXPECT_FALSE(r.rows[0].disc_loss.has_value());
  EXPECT_TRUE(r.rows[0].gt_return.has_value());
  EXPECT_EQ(count_lines(fs::path(r.output_dir) / "progress.csv"), 2);
  EXPECT_EQ(r.counts.target_steps + r.counts.source_steps, 0);
}

TEST_F(HarnessTest, SourceTransferMatchesSourceBudget) {
  const auto d = demos();
  auto o = run_odirl(small("odirl", "o"), d);
  auto c = small("airl_source_transfer", "ast");
  c.grad_steps_multiplier = 2;
  auto t = run(c, d);
  EXPECT_EQ(t.counts.source_rollouts, o.counts.source_rollouts);
  EXPECT_EQ(t.counts.source_rollouts, 3);
  EXPECT_EQ(t.counts.target_rollouts, 7);
  EXPECT_EQ(t.counts.disc_updates, 3 * 2);
  EXPECT_EQ(t.counts.policy_updates, 3 * 2 + 7);
  EXPECT_EQ(t.rows.size(), 7u);
}

TEST_F(HarnessTest, GailRunsWithoutSourceData) {
  auto r = run(small("gail", "gail"), demos());
  EXPECT_EQ(r.counts.source_rollouts, 0);
  EXPECT_EQ(r.counts.source_steps, 0);
  EXPECT_EQ(r.rows.size(), 7u);
  EXPECT_TRUE(fs::exists(fs::path(r.output_dir) / "checkpoints/gail_d.ckpt"));
}

TEST_F(HarnessTest, MissingDemosIsAnError) {
  auto c = small("odirl", "nodemos");
  EXPECT_THROW(run(c), Error);
  c.demos_path = (root_ / "absent.csv").string();
  EXPECT_THROW(run(c), Error);
  auto e = small("expert_transfer", "noexpert");
  EXPECT_THROW(run(e), Error);
}

TEST_F(HarnessTest, AblationWritesOneDirectoryPerAlpha) {
  const auto d = demos();
  auto c = small("odirl", "abl");
  c.steps = 3;
  auto runs = run_ablation(c, {0.0, 0.5, 2.0}, d);
  ASSERT_EQ(runs.size(), 3u);
  for (double a : {0.0, 0.5, 2.0}) {
    const fs::path dir = root_ / "abl" / alpha_dir_name(a);
    EXPECT_TRUE(fs::exists(dir / "progress.csv")) << dir;
    EXPECT_TRUE(fs::exists(dir / "heatmap.csv"));
    EXPECT_TRUE(fs::exists(dir / "eval_target.csv"));
    EXPECT_TRUE(fs::exists(dir / "eval_source.csv"));
  }
  auto a = small("airl", "abl_airl");
  a.steps = 3;
  auto ra = run(a, d);
  EXPECT_EQ(slurp(root_ / "abl" / alpha_dir_name(0.0) / "progress.csv"), slurp(fs::path(ra.output_dir) / "progress.csv"));
  EXPECT_THROW(run_ablation(c, {}, d), Error);
  EXPECT_THROW(run_ablation(a, {1.0}, d), Error);
}

class AggregateTest : public HarnessTest {
 protected:
  fs::path fake_run(const std::string& name, const std::string& method,
                    const std::vector<std::pair<int, std::optional<double>>>& rows) {
    const fs::path dir = root_ / name;
    fs::create_directories(dir);
    std::ofstream(dir / "config.json") << nlohmann::json{{"method", method}}.dump();
    std::ofstream os(dir / "progress.csv");
    os << kProgressHeader << '\n';
    for (const auto& [it, ret] : rows) {
      ProgressRow r;
      r.iteration = it;
      r.gt_return = ret;
      if (ret) r.success_rate = *ret > -1 ? 1.0 : 0.0;
      os << format_progress_row(r) << '\n';
    }
    return dir;
  }
};

TEST_F(AggregateTest, SingleSeedBandCollapses) {
  auto d = fake_run("s0", "odirl", {{1, std::nullopt}, {2, -3.0}, {3, std::nullopt}, {4, -0.5}});
  auto rows = aggregate({d.string()});
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.mean, r.min);
    EXPECT_EQ(r.mean, r.max);
    EXPECT_EQ(r.num_runs, 1);
  }
  EXPECT_EQ(rows[1].iteration, 4);
  EXPECT_EQ(rows[1].success_mean, 1.0);
}

TEST_F(AggregateTest, ConstantSeedsAndMethods) {
  std::vector<std::string> dirs;
  for (int s = 0; s < 3; ++s) {
    dirs.push_back(fake_run("o" + std::to_string(s), "odirl", {{10, -2.5}, {20, -2.5}}).string());
  }
  dirs.push_back(fake_run("a0", "airl", {{10, -7.0}, {20, -9.0}}).string());
  dirs.push_back(fake_run("a1", "airl", {{10, -5.0}, {20, -3.0}}).string());
  auto rows = aggregate(dirs);
  ASSERT_EQ(rows.size(), 4u);
  for (const auto& r : rows) {
    if (r.method == "odirl") {
      EXPECT_EQ(r.num_runs, 3);
      EXPECT_EQ(r.mean, -2.5);
      EXPECT_EQ(r.min, -2.5);
      EXPECT_EQ(r.max, -2.5);
    } else {
      EXPECT_EQ(r.num_runs, 2);
      EXPECT_DOUBLE_EQ(r.mean, r.iteration == 10 ? -6.0 : -6.0);
      EXPECT_EQ(r.min, r.iteration == 10 ? -7.0 : -9.0);
      EXPECT_EQ(r.max, r.iteration == 10 ? -5.0 : -3.0);
    }
  }
  const fs::path out = root_ / "agg.csv";
  write_aggregate_csv(out.string(), rows);
  EXPECT_EQ(count_lines(out), 5);
}

TEST_F(AggregateTest, MismatchedGridIsAnError) {
  auto a = fake_run("m0", "odirl", {{10, -1.0}, {20, -1.0}});
  auto b = fake_run("m1", "odirl", {{10, -1.0}, {30, -1.0}});
  EXPECT_THROW(aggregate({a.string(), b.string()}), Error);
  EXPECT_THROW(aggregate({}), Error);
}

TEST_F(AggregateTest, RowsMatchEvaluationCheckpoints) {
  auto c = small("odirl", "evalgrid");
  auto r = run_odirl(c, demos());
  auto rows = aggregate({r.output_dir});
  // eval_every = 3 over 7 iterations: 3, 6 and the final 7.
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].iteration, 3);
  EXPECT_EQ(rows[2].iteration, 7);
}

TEST(ProgressRow, EmptyCellsForUnsetFields) {
  ProgressRow r;
  r.iteration = 5;
  r.target_steps = 100;
  r.source_steps = 4;
  r.disc_loss = 1.5;
  EXPECT_EQ(format_progress_row(r), "5,100,4,1.5,,,,,");
}

TEST(AlphaDirName, Examples) {
  EXPECT_EQ(alpha_dir_name(0.0), "alpha_0");
  EXPECT_EQ(alpha_dir_name(0.5), "alpha_0.5");
  EXPECT_EQ(alpha_dir_name(2.0), "alpha_2");
}

}  // namespace
}  // namespace odirl::harness
