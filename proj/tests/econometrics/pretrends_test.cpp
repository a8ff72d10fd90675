#include <gtest/gtest.h>

#include <cmath>

#include "gelab/econometrics/errors.hpp"
#include "gelab/econometrics/pretrends.hpp"
#include "gelab/simkit/replicate.hpp"
#include "gelab/simkit/synth.hpp"
#include "test_support.hpp"

using namespace gelab;
using namespace gelab::econometrics;

namespace {

simkit::ScenarioConfig trend_config(double slope, std::uint64_t seed = 5) {
  simkit::ScenarioConfig c;
  c.rng_seed = seed;
  c.n_items = 240;
  c.n_days = 70;
  c.price.log_min = 12.0;
  c.price.log_max = 15.0;
  c.price.ar = 0.5;
  c.price.volatility = 0.05;
  c.sink_rounds.push_back(simkit::SinkRound{add_days(c.start_date, 56), {}, 100, 1});
  c.pretrend.item_set = "sink_round_1";
  c.pretrend.slope_per_week = slope;
  return c;
}

PretrendsSpec spec_for(const Panel& p, const simkit::ScenarioConfig& c) {
  PretrendsSpec s;
  s.treated = p.metadata().item_sets.at("sink_round_1");
  s.control = p.metadata().item_sets.at("non_sink_high_level");
  s.implementation = c.sink_rounds[0].start;
  s.window_start = c.start_date;
  return s;
}

}  // namespace

TEST(Pretrends, IdenticalSeriesGiveZeroDifference) {
  std::vector<PanelObservation> obs;
  for (int item = 1; item <= 6; ++item) {
    for (int d = 0; d < 35; ++d) obs.push_back({ItemId{item}, gelab::test::day(d), 100.0 * std::exp(0.01 * d), 5.0});
  }
  PretrendsSpec s;
  s.treated = {ItemId{1}, ItemId{2}, ItemId{3}};
  s.control = {ItemId{4}, ItemId{5}, ItemId{6}};
  s.implementation = gelab::test::day(28);
  s.window_start = gelab::test::day(0);
  s.plot_end = gelab::test::day(34);
  const auto r = pretrends_test(Panel(std::move(obs)), s);
  EXPECT_NEAR(r.difference, 0.0, 1e-12);
  EXPECT_NEAR(r.slope_control, 0.07, 1e-10);
  EXPECT_EQ(r.n_obs, 6u * 28u);
  EXPECT_EQ(r.n_weeks, 4);
  // Weekly means run from week -4 through the plotted post week 0.
  EXPECT_EQ(r.weekly.front().week, -4);
  EXPECT_EQ(r.weekly.back().week, 0);
}

TEST(Pretrends, DetectsDivergingTrend) {
  const auto c = trend_config(0.01);
  const Panel p = simkit::synth_panel(c);
  const auto r = pretrends_test(p, spec_for(p, c));
  EXPECT_LT(r.p_value, 0.05);
  EXPECT_NEAR(r.difference, 0.01, 0.005);
}

TEST(Pretrends, SizeUnderParallelTrends) {
  auto c = trend_config(0.0, 77);
  c.n_items = 60;
  c.sink_rounds[0].count = 20;
  const auto reps = simkit::replicate(c, 200, [&](const Panel& p) { return pretrends_test(p, spec_for(p, c)).p_value; });
  int rejected = 0;
  for (const auto& r : reps) {
    ASSERT_TRUE(r.ok()) << r.error_message;
    rejected += *r.value < 0.05;
  }
  const double rate = rejected / 200.0;
  EXPECT_LE(rate, 0.10);
  EXPECT_GE(rate, 0.01);
}

TEST(Pretrends, WindowTooShort) {
  const auto c = trend_config(0.0);
  const Panel p = simkit::synth_panel(c);
  auto s = spec_for(p, c);
  s.window_start = add_days(s.implementation, -14);
  try {
    pretrends_test(p, s);
    FAIL();
  } catch (const EstimationError& e) {
    EXPECT_EQ(e.kind(), EstimationErrc::WindowTooShort);
  }
}
