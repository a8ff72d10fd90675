#include <gtest/gtest.h>

#include "cli_helpers.hpp"
#include "fixture_server.hpp"
#include "gelab/ingest/panel_csv.hpp"

using namespace gelab;
using namespace gelab::test;

namespace {

void load_fixtures(FixtureServer& server) {
  server.set_payload(2, read_file(fixture_path("timeseries_item_2.json")));
  server.set_payload(6, read_file(fixture_path("timeseries_item_6.json")));
}

}  // namespace

TEST(CliIngest, ApiFetchThenWarmCache) {
  FixtureServer server;
  load_fixtures(server);
  TempDir dir;
  const std::vector<std::string> args{"ingest", "api", "--items", "2,6", "--base-url", server.base_url(),
                                      "--cache-dir", (dir / "cache").string(), "--interval-ms", "100",
                                      "--user-agent", "gelab-test (ci)", "--quiet", "--out"};
  auto first = args;
  first.push_back((dir / "a").string());
  const auto r1 = run_cli(first);
  ASSERT_EQ(r1.code, 0) << r1.err;
  const Panel panel = ingest::load_panel_csv(dir / "a" / "panel.csv");
  EXPECT_EQ(panel.size(), 60u);
  EXPECT_EQ(panel.items().size(), 2u);
  EXPECT_EQ(panel.metadata().provenance, Provenance::ingested);
  auto manifest = read_json(dir / "a" / "manifest.json");
  EXPECT_EQ(manifest["fetch"]["network_requests"], 2);
  EXPECT_EQ(manifest["fetch"]["rows"], 60);
  EXPECT_EQ(server.request_count(), 2u);
  for (const auto& ua : server.user_agents()) EXPECT_EQ(ua, "gelab-test (ci)");

  auto second = args;
  second.push_back((dir / "b").string());
  const auto r2 = run_cli(second);
  ASSERT_EQ(r2.code, 0) << r2.err;
  EXPECT_EQ(server.request_count(), 2u);
  manifest = read_json(dir / "b" / "manifest.json");
  EXPECT_EQ(manifest["fetch"]["network_requests"], 0);
  EXPECT_EQ(manifest["fetch"]["cache_hits"], 2);
  EXPECT_EQ(read_file(dir / "a" / "panel.csv"), read_file(dir / "b" / "panel.csv"));
}

TEST(CliIngest, ApiUnknownItemExits4) {
  FixtureServer server;
  TempDir dir;
  const auto r = run_cli({"--json-errors", "ingest", "api", "--items", "424242", "--base-url", server.base_url(),
                          "--interval-ms", "100", "--out", dir.path().string()});
  EXPECT_EQ(r.code, 4);
  EXPECT_EQ(nlohmann::json::parse(r.err)["error"]["code"], "UnknownItem");
}

TEST(CliIngest, ApiNeedsItems) {
  TempDir dir;
  EXPECT_EQ(run_cli({"ingest", "api", "--out", dir.path().string()}).code, 2);
}

TEST(CliIngest, CsvRoundTripAndBadRow) {
  TempDir dir;
  write_file(dir / "in.csv", "item_id,date,price,volume\n2,2021-12-01,110,5\n2,2021-12-02,111,6\n");
  auto r = run_cli({"ingest", "csv", (dir / "in.csv").string(), "--out", (dir / "ok").string(), "--quiet"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(ingest::load_panel_csv(dir / "ok" / "panel.csv").size(), 2u);
  EXPECT_TRUE(std::filesystem::exists(dir / "ok" / "panel.csv.meta.json"));

  write_file(dir / "bad.csv", "item_id,date,price,volume\n2,2021-12-01,110,5\n2,2021-12-02,-3,6\n");
  r = run_cli({"--json-errors", "ingest", "csv", (dir / "bad.csv").string(), "--out", (dir / "bad").string()});
  EXPECT_EQ(r.code, 4);
  const auto err = nlohmann::json::parse(r.err)["error"];
  EXPECT_EQ(err["details"]["row"], "3");
  EXPECT_EQ(err["details"]["field"], "price");

  r = run_cli({"ingest", "csv", (dir / "bad.csv").string(), "--out", (dir / "bad2").string()});
  EXPECT_EQ(r.code, 4);
  EXPECT_NE(r.err.find("row: 3"), std::string::npos) << r.err;
}

TEST(CliIngest, GpPrices) {
  TempDir dir;
  const auto r = run_cli({"ingest", "gp", "--official", fixture_path("gp_official.csv").string(), "--sellers",
                          fixture_path("gp_sellers.csv").string(), "--out", dir.path().string(), "--quiet"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto summary = read_json(dir / "gp_summary.json");
  EXPECT_NEAR(summary["official_mean"].get<double>(), 4.17, 0.005);
  EXPECT_NEAR(summary["illicit_mean"].get<double>(), 0.495, 0.0005);
  EXPECT_EQ(summary["premium_dates"], 36);
  for (const char* f : {"gp_prices.csv", "premium.csv", "manifest.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  EXPECT_EQ(run_cli({"ingest", "gp", "--out", (dir / "x").string()}).code, 2);
}
