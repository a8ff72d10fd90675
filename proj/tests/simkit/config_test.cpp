#include <gtest/gtest.h>

#include "gelab/simkit/config.hpp"
#include "test_support.hpp"

using namespace gelab;
using namespace gelab::simkit;

namespace {

const FieldDiagnostic* find_diag(const ConfigError& e, const std::string& field) {
  for (const auto& d : e.diagnostics()) {
    if (d.field == field) return &d;
  }
  return nullptr;
}

}  // namespace

TEST(ScenarioConfig, DemoParses) {
  const ScenarioConfig c = load_scenario_config(std::string(GELAB_FIXTURE_DIR) + "/../../configs/demo.yaml");
  EXPECT_EQ(c.rng_seed, 20211209u);
  EXPECT_EQ(c.n_items, 60);
  EXPECT_EQ(c.start_date, make_date(2021, 11, 9));
  EXPECT_TRUE(c.tax.enabled);
  EXPECT_EQ(c.tax.schedule.rate_num, 1);
  EXPECT_EQ(c.tax.schedule.rate_den, 100);
  ASSERT_EQ(c.sink_rounds.size(), 2u);
  EXPECT_EQ(c.sink_rounds[1].count, 10);
  ASSERT_EQ(c.injected_effects.size(), 2u);
  EXPECT_DOUBLE_EQ(c.injected_effects[1].magnitude, 0.147);
  EXPECT_EQ(c.injected_effects[1].outcome, OutcomeVar::price);
}

TEST(ScenarioConfig, DiagnosticsCarryLineNumbers) {
  const std::string text =
      "seed: 1\n"
      "items: many\n"
      "days: 10\n"
      "price:\n"
      "  ar: 1.5\n"
      "  colour: red\n";
  try {
    parse_scenario_config(text, "bad.yaml");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.code(), "ConfigInvalid");
    const auto* items = find_diag(e, "items");
    ASSERT_NE(items, nullptr);
    EXPECT_EQ(items->line, 2);
    const auto* colour = find_diag(e, "price.colour");
    ASSERT_NE(colour, nullptr);
    EXPECT_EQ(colour->line, 6);
    EXPECT_NE(std::string(e.what()).find("bad.yaml"), std::string::npos);
  }
}

TEST(ScenarioConfig, RangeChecksReportField) {
  const std::string text =
      "days: 10\n"
      "start_date: 2021-11-01\n"
      "price:\n"
      "  ar: 1.5\n"
      "tax:\n"
      "  enabled: true\n"
      "  start: 2022-06-01\n";
  try {
    parse_scenario_config(text);
    FAIL();
  } catch (const ConfigError& e) {
    const auto* ar = find_diag(e, "price.ar");
    ASSERT_NE(ar, nullptr);
    EXPECT_EQ(ar->line, 4);
    const auto* start = find_diag(e, "tax.start");
    ASSERT_NE(start, nullptr);
    EXPECT_EQ(start->line, 7);
  }
}

TEST(ScenarioConfig, SyntaxError) {
  try {
    parse_scenario_config("seed: [1, 2\nitems: 3\n");
    FAIL();
  } catch (const ConfigError& e) {
    ASSERT_FALSE(e.diagnostics().empty());
    EXPECT_GT(e.diagnostics()[0].line, 0);
  }
}

TEST(ScenarioConfig, MissingFile) {
  try {
    load_scenario_config("/nonexistent/scenario.yaml");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/scenario.yaml"), std::string::npos);
  }
}

TEST(ScenarioConfig, RateAcceptsDecimalAndFraction) {
  const auto a = parse_scenario_config("tax:\n  enabled: true\n  rate: 0.02\n");
  EXPECT_EQ(a.tax.schedule.rate_num, 1);
  EXPECT_EQ(a.tax.schedule.rate_den, 50);
  const auto b = parse_scenario_config("tax:\n  enabled: true\n  rate: 3/200\n");
  EXPECT_EQ(b.tax.schedule.rate_num, 3);
  EXPECT_EQ(b.tax.schedule.rate_den, 200);
}

TEST(ScenarioConfig, ValidateCollectsEveryViolation) {
  ScenarioConfig c;
  c.n_items = 0;
  c.n_days = 0;
  c.volume.noise_sd = -1;
  try {
    validate(c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_GE(e.diagnostics().size(), 3u);
  }
}

TEST(ScenarioConfig, EffectLocusMustMatchKind) {
  ScenarioConfig c;
  InjectedEffect e;
  e.kind = EffectKind::did_level;
  e.magnitude = 0.1;
  c.injected_effects.push_back(e);
  EXPECT_THROW(validate(c), ConfigError);
  c.injected_effects[0].kind = EffectKind::rd_step;
  c.injected_effects[0].cutoff = 100;
  EXPECT_NO_THROW(validate(c));
}
