#include <gtest/gtest.h>

#include <chrono>

#include "bundle.hpp"
#include "cli_helpers.hpp"
#include "gelab/ingest/panel_csv.hpp"
#include "gelab/simkit/config.hpp"
#include "gelab/simkit/scenario.hpp"

using namespace gelab;
using namespace gelab::test;

TEST(CliSimulate, DemoConfigProducesDeclaredArtifacts) {
  TempDir dir;
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = run_cli({"simulate", config_path("demo.yaml"), "--out", dir.path().string(), "--quiet"});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LT(secs, 60.0);
  for (const char* f : {"panel.csv", "panel.csv.meta.json", "trades.csv", "removals.csv", "summary.json",
                        "config.yaml", "manifest.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / f)) << f;
  }
  const auto manifest = read_json(dir / "manifest.json");
  EXPECT_EQ(manifest["command"], "simulate");
  EXPECT_EQ(manifest["parameters"]["seed"], 20211209u);
  EXPECT_EQ(manifest["config_text"], read_file(config_path("demo.yaml")));
  for (const auto& [name, sha] : manifest["artifacts"].items()) {
    EXPECT_EQ(sha, cli::sha256_file(dir / name)) << name;
  }
  const auto summary = read_json(dir / "summary.json");
  EXPECT_GT(summary["trades"].get<int>(), 1000);
  EXPECT_GT(summary["removals"].get<int>(), 0);
}

TEST(CliSimulate, RepeatRunsAreIdentical) {
  TempDir a, b;
  ASSERT_EQ(run_cli({"simulate", config_path("demo.yaml"), "--out", a.path().string(), "--quiet"}).code, 0);
  ASSERT_EQ(run_cli({"--quiet", "--out", b.path().string(), "simulate", config_path("demo.yaml")}).code, 0);
  EXPECT_EQ(read_file(a / "manifest.json"), read_file(b / "manifest.json"));
  EXPECT_EQ(read_file(a / "trades.csv"), read_file(b / "trades.csv"));
}

TEST(CliSimulate, MatchesLibraryRun) {
  TempDir dir;
  ASSERT_EQ(run_cli({"simulate", config_path("demo.yaml"), "--out", dir.path().string(), "--quiet"}).code, 0);
  const auto result = simkit::run_scenario(simkit::load_scenario_config(config_path("demo.yaml")));
  EXPECT_EQ(ingest::load_panel_csv(dir / "panel.csv"), result.panel);
}

TEST(CliSimulate, SeedOverrideChangesOutput) {
  TempDir a, b;
  ASSERT_EQ(run_cli({"simulate", config_path("demo.yaml"), "--engine", "synth", "--out", a.path().string(), "--quiet"}).code, 0);
  ASSERT_EQ(run_cli({"simulate", config_path("demo.yaml"), "--engine", "synth", "--seed", "5", "--out", b.path().string(), "--quiet"}).code, 0);
  EXPECT_NE(read_file(a / "panel.csv"), read_file(b / "panel.csv"));
  EXPECT_EQ(read_json(b / "manifest.json")["parameters"]["seed"], 5);
  EXPECT_FALSE(std::filesystem::exists(a / "trades.csv"));
}

TEST(CliSimulate, MissingConfigExits2NamingPath) {
  TempDir dir;
  const auto r = run_cli({"simulate", "/nonexistent/demo.yaml", "--out", dir.path().string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("/nonexistent/demo.yaml"), std::string::npos);
}

TEST(CliSimulate, InvalidConfigReportsLineAndField) {
  TempDir dir;
  write_file(dir / "bad.yaml", "seed: 1\nitems: 5\nprice:\n  ar: 2.0\n");
  const auto r = run_cli({"--json-errors", "simulate", (dir / "bad.yaml").string(), "--out", (dir / "out").string()});
  EXPECT_EQ(r.code, 2);
  const auto err = nlohmann::json::parse(r.err)["error"];
  EXPECT_EQ(err["code"], "ConfigInvalid");
  bool found = false;
  for (const auto& d : err["diagnostics"]) {
    if (d["field"] == "price.ar") {
      found = true;
      EXPECT_EQ(d["line"], 4);
    }
  }
  EXPECT_TRUE(found) << r.err;
}

TEST(CliSimulate, UsageErrors) {
  EXPECT_EQ(run_cli({"simulate"}).code, 2);
  EXPECT_EQ(run_cli({"frobnicate"}).code, 2);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
  EXPECT_EQ(run_cli({"simulate", config_path("demo.yaml"), "--engine", "quantum"}).code, 2);
}

TEST(CliReport, IndexListsArtifacts) {
  TempDir dir;
  ASSERT_EQ(run_cli({"simulate", config_path("demo.yaml"), "--engine", "synth", "--out", dir.path().string(), "--quiet"}).code, 0);
  ASSERT_EQ(run_cli({"analyze", "index", (dir / "panel.csv").string(), "--out", dir.path().string(), "--quiet"}).code, 0);
  ASSERT_EQ(run_cli({"report", dir.path().string(), "--quiet"}).code, 0);
  const std::string html = read_file(dir / "index.html");
  EXPECT_NE(html.find("panel.csv"), std::string::npos);
  EXPECT_NE(html.find("<img src=\"index.svg\">"), std::string::npos);
  EXPECT_NE(html.find(cli::sha256_file(dir / "panel.csv")), std::string::npos);
  EXPECT_EQ(run_cli({"report", "/nonexistent/bundle"}).code, 4);
}

TEST(CliMonteCarlo, WritesReplications) {
  TempDir dir;
  write_file(dir / "rd.yaml",
             "seed: 9\nitems: 30\ndays: 20\nprice:\n  log_min: 4.25\n  log_max: 4.87\n  ar: 0.5\n  volatility: 0.08\n"
             "volume:\n  intercept: 5\n  price_slope: -0.001\n  noise_sd: 0.3\n"
             "effects:\n  - kind: rd_step\n    magnitude: -0.069\n    cutoff: 100\n");
  const auto r = run_cli({"montecarlo", (dir / "rd.yaml").string(), "--design", "rd", "--reps", "20", "--threads", "2",
                          "--out", (dir / "mc").string(), "--quiet"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto summary = read_json(dir / "mc" / "summary.json");
  EXPECT_DOUBLE_EQ(summary["truth"].get<double>(), -0.069);
  EXPECT_EQ(summary["succeeded"].get<int>() + summary["failed"].get<int>(), 20);
  EXPECT_TRUE(std::filesystem::exists(dir / "mc" / "replications.csv"));
}
