#include <filesystem>
#include <fstream>
#include <string>

#include <unistd.h>

#include <gtest/gtest.h>

#include "odirl/demos.hpp"
#include "odirl/replay_buffer.hpp"

namespace odirl::buffers {
namespace {

namespace fs = std::filesystem;

Transition make(double id, Domain d = Domain::kTarget) {
  Transition t;
  t.s = Vec::Constant(2, id);
  t.a = Vec::Constant(1, -id);
  t.s_next = Vec::Constant(2, id + 1);
  t.domain = d;
  return t;
}

Trajectory chain(int n, Domain d, double start = 0) {
  Trajectory traj;
  for (int i = 0; i < n; ++i) traj.push_back(make(start + i, d));
  return traj;
}

TEST(ReplayBuffer, FifoEviction) {
  ReplayBuffer buf(5, Domain::kTarget);
  buf.push(chain(10, Domain::kTarget));
  ASSERT_EQ(buf.size(), 5u);
  EXPECT_EQ(buf.insertions(), 10u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(buf.at(i).s[0], 5.0 + static_cast<double>(i));
  buf.push(chain(2, Domain::kTarget, 100));
  EXPECT_EQ(buf.at(0).s[0], 7.0);
  EXPECT_EQ(buf.at(4).s[0], 101.0);
  EXPECT_THROW(buf.at(5), Error);
}

TEST(ReplayBuffer, EmptyPushIsNoOp) {
  ReplayBuffer buf(5, Domain::kSource);
  buf.push(Trajectory{});
  EXPECT_TRUE(buf.empty());
  EXPECT_EQ(buf.insertions(), 0u);
}

TEST(ReplayBuffer, TagMismatchIsAnError) {
  ReplayBuffer buf(5, Domain::kTarget);
  Trajectory mixed = chain(3, Domain::kTarget);
  mixed[1].domain = Domain::kSource;
  EXPECT_THROW(buf.push(mixed), Error);
  EXPECT_TRUE(buf.empty());
  EXPECT_THROW(buf.push(chain(1, Domain::kSource)), Error);
  EXPECT_THROW(ReplayBuffer(0, Domain::kTarget), Error);
}

TEST(ReplayBuffer, SampleEdgeCases) {
  ReplayBuffer buf(5, Domain::kTarget);
  Rng rng(0);
  EXPECT_TRUE(buf.sample(0, rng).empty());
  EXPECT_THROW(buf.sample(1, rng), Error);
  buf.push(chain(1, Domain::kTarget, 42));
  EXPECT_EQ(buf.sample_batch(0, rng).size(), 0);
  auto four = buf.sample(4, rng);
  ASSERT_EQ(four.size(), 4u);
  for (const auto& t : four) {
    EXPECT_EQ(t.s, buf.at(0).s);
    EXPECT_EQ(t.a, buf.at(0).a);
  }
}

TEST(ReplayBuffer, UniformSampling) {
  ReplayBuffer buf(10, Domain::kTarget);
  buf.push(chain(10, Domain::kTarget));
  Rng rng(123);
  std::vector<int> counts(10, 0);
  const int n = 100000;
  for (const auto& t : buf.sample(n, rng)) ++counts[static_cast<std::size_t>(t.s[0])];
  double chi2 = 0.0;
  const double expected = n / 10.0;
  for (int c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // Upper 1% point of chi-squared with 9 degrees of freedom.
  EXPECT_LT(chi2, 21.666);
}

TEST(ReplayBuffer, SamplingIsReproducible) {
  ReplayBuffer buf(50, Domain::kSource);
  buf.push(chain(50, Domain::kSource));
  Rng a(8), b(8);
  const auto x = buf.sample_batch(64, a);
  const auto y = buf.sample_batch(64, b);
  EXPECT_EQ(x.s, y.s);
  EXPECT_EQ(x.a, y.a);
  EXPECT_EQ(x.s_next, y.s_next);
}

class DemoFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("odirl_demos_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
    spec_.state_dim = 2;
    spec_.action_dim = 1;
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  DemoSet sample_demos() const {
    Trajectory a = chain(3, Domain::kSource, 0.1);
    a.back().done = true;
    Trajectory b = chain(2, Domain::kSource, 1.0 / 3.0);
    b[0].s[1] = std::nextafter(0.7, 1.0);
    b[1].a[0] = -1e-300;
    return DemoSet({a, b}, {"abc123", 7, 50});
  }

  fs::path dir_;
  env::EnvSpec spec_;
};

TEST_F(DemoFiles, RoundTripIsExact) {
  const DemoSet demos = sample_demos();
  save_demos(path("d.csv"), demos, 2, 1);
  LoadedDemos back = load_demos(path("d.csv"), spec_, "abc123");
  EXPECT_TRUE(back.warnings.empty());
  EXPECT_EQ(back.demos.metadata().env_config_hash, "abc123");
  EXPECT_EQ(back.demos.metadata().expert_seed, 7u);
  EXPECT_EQ(back.demos.metadata().horizon, 50);
  ASSERT_EQ(back.demos.size(), demos.size());
  for (std::size_t i = 0; i < demos.size(); ++i) {
    const auto& x = demos.transitions()[i];
    const auto& y = back.demos.transitions()[i];
    EXPECT_EQ(x.s, y.s);
    EXPECT_EQ(x.a, y.a);
    EXPECT_EQ(x.s_next, y.s_next);
    EXPECT_EQ(x.done, y.done);
    EXPECT_EQ(x.domain, y.domain);
  }
  EXPECT_EQ(back.demos.trajectories().size(), 2u);
}

TEST_F(DemoFiles, WrongColumnCountNamesTheRow) {
  save_demos(path("d.csv"), sample_demos(), 2, 1);
  std::ifstream in(path("d.csv"));
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();
  // Drop the last field of the third data row.
  std::size_t pos = 0;
  for (int line = 0; line < 4; ++line) pos = text.find('\n', pos) + 1;
  const std::size_t end = text.find('\n', pos);
  const std::size_t comma = text.rfind(',', end);
  text.erase(comma, end - comma);
  std::ofstream(path("bad.csv")) << text;
  try {
    load_demos(path("bad.csv"), spec_);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("row 3"), std::string::npos) << e.what();
  }
}

TEST_F(DemoFiles, DimensionMismatchIsAnError) {
  save_demos(path("d.csv"), sample_demos(), 2, 1);
  env::EnvSpec other = spec_;
  other.state_dim = 3;
  EXPECT_THROW(load_demos(path("d.csv"), other), Error);
  EXPECT_THROW(load_demos(path("missing.csv"), spec_), Error);
}

TEST_F(DemoFiles, HashMismatchWarnsAndLoads) {
  save_demos(path("d.csv"), sample_demos(), 2, 1);
  LoadedDemos back = load_demos(path("d.csv"), spec_, "different");
  ASSERT_EQ(back.warnings.size(), 1u);
  EXPECT_NE(back.warnings[0].find("abc123"), std::string::npos);
  EXPECT_EQ(back.demos.size(), 5u);
}

TEST(DemoSet, RejectsTargetTransitionsAndEmpty) {
  EXPECT_THROW(DemoSet({chain(2, Domain::kTarget)}, {}), Error);
  EXPECT_THROW(DemoSet({}, {}), Error);
}

TEST(DemoSet, SamplingIsReproducible) {
  DemoSet d({chain(20, Domain::kSource)}, {});
  Rng a(1), b(1);
  EXPECT_EQ(d.sample_batch(16, a).s, d.sample_batch(16, b).s);
}

}  // namespace
}  // namespace odirl::buffers
