#include <gtest/gtest.h>

#include <sstream>

#include "gelab/ingest/errors.hpp"
#include "gelab/ingest/panel_csv.hpp"
#include "gelab/simkit/scenario.hpp"
#include "gelab/simkit/synth.hpp"
#include "test_support.hpp"

using namespace gelab;
using namespace gelab::ingest;

namespace {

IngestError parse_error(const std::string& text) {
  std::istringstream in(text);
  try {
    parse_panel_csv(in, "inline.csv");
  } catch (const IngestError& e) {
    return e;
  }
  ADD_FAILURE() << "no error for:\n" << text;
  return IngestError(IngestErrc::IoError, "none");
}

}  // namespace

TEST(PanelCsv, WellFormedThreeRows) {
  std::istringstream in("item_id,date,price,volume\n1,2021-12-01,100,5\n1,2021-12-02,101.5,0\n2,2021-12-01,7,3\n");
  const Panel p = parse_panel_csv(in);
  ASSERT_EQ(p.size(), 3u);
  EXPECT_DOUBLE_EQ(p.series(ItemId{1})[1].price, 101.5);
  EXPECT_EQ(p.items().size(), 2u);
}

TEST(PanelCsv, DuplicateKeyNamesRow) {
  const auto e = parse_error("item_id,date,price,volume\n1,2021-12-01,100,5\n2,2021-12-01,7,3\n1,2021-12-01,100,5\n");
  EXPECT_EQ(e.kind(), IngestErrc::DuplicateKey);
  EXPECT_EQ(e.detail("row"), "4");
  EXPECT_EQ(e.detail("first_row"), "2");
  EXPECT_NE(std::string(e.what()).find("4"), std::string::npos);
}

TEST(PanelCsv, SchemaErrors) {
  EXPECT_EQ(parse_error("item,date,price,volume\n").kind(), IngestErrc::SchemaError);
  auto e = parse_error("item_id,date,price,volume\n1,2021-12-01,100\n");
  EXPECT_EQ(e.kind(), IngestErrc::SchemaError);
  EXPECT_EQ(e.detail("row"), "2");
  e = parse_error("item_id,date,price,volume\n1,2021-12-01,100,5\n1,2021-13-01,100,5\n");
  EXPECT_EQ(e.detail("row"), "3");
  EXPECT_EQ(e.detail("field"), "date");
  e = parse_error("item_id,date,price,volume\n1,2021-12-01,abc,5\n");
  EXPECT_EQ(e.detail("field"), "price");
  e = parse_error("item_id,date,price,volume\n1,2021-12-01,10,-5\n");
  EXPECT_EQ(e.detail("field"), "volume");
}

TEST(PanelCsv, NonPositivePrice) {
  const auto e = parse_error("item_id,date,price,volume\n1,2021-12-01,0,5\n");
  EXPECT_EQ(e.kind(), IngestErrc::NonPositivePrice);
  EXPECT_EQ(e.detail("row"), "2");
  std::istringstream ok("item_id,date,price,volume\n1,2021-12-01,0,0\n");
  EXPECT_EQ(parse_panel_csv(ok).size(), 1u);
}

TEST(PanelCsv, RoundTripSimulatedPanel) {
  gelab::test::TempDir dir;
  simkit::ScenarioConfig c;
  c.n_items = 12;
  c.n_days = 25;
  c.price.volatility = 0.03;
  c.volume.noise_sd = 0.4;
  c.sink_rounds.push_back(simkit::SinkRound{add_days(c.start_date, 10), {}, 3, 2});
  InjectedEffect e;
  e.kind = EffectKind::did_level;
  e.magnitude = 0.07;
  e.item_set = "sink_round_1";
  e.effect_date = add_days(c.start_date, 10);
  c.injected_effects.push_back(e);
  for (const Panel& original : {simkit::synth_panel(c), simkit::run_scenario(c).panel}) {
    const auto path = dir / "panel.csv";
    write_panel_csv(path, original);
    EXPECT_TRUE(std::filesystem::exists(sidecar_path(path)));
    const Panel loaded = load_panel_csv(path);
    EXPECT_EQ(loaded, original);
  }
}

TEST(PanelCsv, MissingFile) {
  try {
    load_panel_csv("/nonexistent/panel.csv");
    FAIL();
  } catch (const IngestError& e) {
    EXPECT_EQ(e.kind(), IngestErrc::IoError);
  }
}

TEST(PanelCsv, LoadWithoutSidecarIsIngested) {
  gelab::test::TempDir dir;
  gelab::test::write_file(dir / "p.csv", "item_id,date,price,volume\n3,2021-12-01,10,1\n");
  const Panel p = load_panel_csv(dir / "p.csv");
  EXPECT_EQ(p.metadata().provenance, Provenance::ingested);
  EXPECT_FALSE(p.metadata().ground_truth.has_value());
}
