#include <gtest/gtest.h>

#include "gelab/simkit/replicate.hpp"
#include "test_support.hpp"

using namespace gelab;
using namespace gelab::simkit;

namespace {

ScenarioConfig noisy() {
  ScenarioConfig c;
  c.rng_seed = 31;
  c.n_items = 10;
  c.n_days = 15;
  c.price.volatility = 0.05;
  c.volume.noise_sd = 0.2;
  return c;
}

double mean_log_volume(const Panel& p) {
  double s = 0;
  for (const auto& o : p.observations()) s += std::log(o.volume);
  return s / static_cast<double>(p.size());
}

}  // namespace

TEST(Replicate, SingleReplicationEqualsDirectRun) {
  const auto reps = replicate(noisy(), 1, mean_log_volume);
  ASSERT_EQ(reps.size(), 1u);
  ASSERT_TRUE(reps[0].ok());
  EXPECT_EQ(reps[0].seed, noisy().rng_seed);
  EXPECT_EQ(*reps[0].value, mean_log_volume(synth_panel(noisy())));
}

TEST(Replicate, IndependentOfThreadCount) {
  const auto a = replicate(noisy(), 24, mean_log_volume, {1, PanelSource::synthetic});
  const auto b = replicate(noisy(), 24, mean_log_volume, {4, PanelSource::synthetic});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].seed, b[k].seed);
    EXPECT_EQ(*a[k].value, *b[k].value);
  }
  EXPECT_NE(*a[0].value, *a[1].value);
}

TEST(Replicate, AddingReplicationsKeepsEarlierSeeds) {
  const auto a = replicate(noisy(), 5, mean_log_volume);
  const auto b = replicate(noisy(), 9, mean_log_volume);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(*a[k].value, *b[k].value);
}

TEST(Replicate, ErrorsAreRecordedPerReplication) {
  std::atomic<int> calls{0};
  auto analysis = [&](const Panel& p) {
    if (calls++ % 3 == 0) throw Error("Planted", "planted failure");
    return p.size();
  };
  const auto reps = replicate(noisy(), 9, analysis);
  int failed = 0;
  for (const auto& r : reps) {
    if (!r.ok()) {
      ++failed;
      EXPECT_EQ(r.error_code, "Planted");
    }
  }
  EXPECT_EQ(failed, 3);
}

TEST(Replicate, ZeroReplicationsRejected) {
  EXPECT_THROW(replicate(noisy(), 0, mean_log_volume), ConfigError);
}

TEST(Replicate, AgentSourceIsDeterministic) {
  ScenarioConfig c = noisy();
  c.n_agents = 20;
  auto n_rows = [](const Panel& p) { return p.size(); };
  const auto a = replicate(c, 3, n_rows, {2, PanelSource::agent});
  const auto b = replicate(c, 3, n_rows, {1, PanelSource::agent});
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(*a[k].value, *b[k].value);
}
