#include <gtest/gtest.h>

#include "cli_helpers.hpp"
#include "gelab/econometrics/break_test.hpp"
#include "gelab/econometrics/correlation.hpp"
#include "gelab/econometrics/did.hpp"
#include "gelab/econometrics/pretrends.hpp"
#include "gelab/econometrics/price_index.hpp"
#include "gelab/econometrics/rd.hpp"
#include "gelab/econometrics/rk.hpp"
#include "gelab/econometrics/serialize.hpp"
#include "gelab/ingest/gp_prices.hpp"
#include "gelab/ingest/panel_csv.hpp"
#include "gelab/simkit/config.hpp"
#include "gelab/simkit/synth.hpp"

using namespace gelab;
using namespace gelab::test;
namespace eco = gelab::econometrics;
using nlohmann::json;

namespace {

const char* kRdYaml =
    "seed: 17\nitems: 40\ndays: 30\nstart_date: 2021-11-01\n"
    "price:\n  log_min: 4.25\n  log_max: 4.87\n  ar: 0.5\n  volatility: 0.08\n"
    "volume:\n  intercept: 5\n  price_slope: -0.001\n  noise_sd: 0.2\n"
    "effects:\n  - kind: rd_step\n    magnitude: -0.069\n    cutoff: 100\n";

std::filesystem::path write_synth(const TempDir& dir, const std::string& yaml) {
  write_file(dir / "scenario.yaml", yaml);
  const auto r = run_cli({"simulate", (dir / "scenario.yaml").string(), "--engine", "synth", "--out",
                          (dir / "sim").string(), "--quiet"});
  EXPECT_EQ(r.code, 0) << r.err;
  return dir / "sim" / "panel.csv";
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

TEST(CliAnalyze, RdMatchesLibrary) {
  TempDir dir;
  const auto panel_path = write_synth(dir, kRdYaml);
  const auto r = run_cli({"analyze", "rd", panel_path.string(), "--cutoff", "100", "--bandwidth", "20", "--out",
                          (dir / "rd").string(), "--quiet"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Panel panel = ingest::load_panel_csv(panel_path);
  eco::RdSpec spec;
  spec.cutoff = 100;
  spec.bandwidth = 20;
  EXPECT_EQ(read_file(dir / "rd" / "rd.json"), dump(json(eco::rd_estimate(panel, spec))));
  for (const char* f : {"rd.csv", "rd_plot.csv", "rd.svg", "manifest.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / "rd" / f)) << f;
  }
  const auto manifest = read_json(dir / "rd" / "manifest.json");
  EXPECT_EQ(manifest["inputs"]["panel"], cli::sha256_file(panel_path));
  EXPECT_EQ(manifest["parameters"]["cutoff"], 100.0);
}

TEST(CliAnalyze, RkMatchesLibrary) {
  TempDir dir;
  const auto panel_path = write_synth(
      dir,
      "seed: 5\nitems: 40\ndays: 30\nstart_date: 2021-11-01\n"
      "price:\n  log_min: 18.8\n  log_max: 20.6\n  ar: 0.5\n  volatility: 0.1\n"
      "volume:\n  intercept: 5\n  price_slope: -0.002\n  price_scale: 1000000\n  noise_sd: 0.2\n"
      "effects:\n  - kind: rk_slope\n    magnitude: -0.001\n    cutoff: 500000000\n    price_unit: 1000000\n");
  const auto r = run_cli({"analyze", "rk", panel_path.string(), "--out", (dir / "rk").string(), "--quiet"});
  ASSERT_EQ(r.code, 0) << r.err;
  eco::RkSpec spec;
  EXPECT_EQ(read_file(dir / "rk" / "rk.json"), dump(json(eco::rk_estimate(ingest::load_panel_csv(panel_path), spec))));
}

TEST(CliAnalyze, DidAutoControlMatchesLibrary) {
  TempDir dir;
  ASSERT_EQ(run_cli({"simulate", config_path("demo.yaml"), "--engine", "synth", "--out", (dir / "sim").string(),
                     "--quiet"}).code, 0);
  const auto panel_path = dir / "sim" / "panel.csv";
  const auto r = run_cli({"analyze", "did", panel_path.string(), "--treated-set", "sink_round_1", "--implementation",
                          "2021-12-09", "--end", "2021-12-15", "--auto-control", "--corr-threshold", "0.5",
                          "--out", (dir / "did").string(), "--quiet"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Panel panel = ingest::load_panel_csv(panel_path);
  eco::ControlSetConfig cc;
  cc.sinked = panel.metadata().item_sets.at("sink_round_1");
  cc.threshold = 0.5;
  cc.window = {std::nullopt, make_date(2021, 12, 8)};
  cc.intervention_date = make_date(2021, 12, 9);
  const auto cs = eco::build_control_set(panel, cc);
  EXPECT_EQ(read_file(dir / "did" / "control_set.json"), dump(json(cs)));

  eco::DidSpec spec;
  spec.treated = cc.sinked;
  spec.control = cs.control;
  spec.implementation = make_date(2021, 12, 9);
  spec.window = {std::nullopt, make_date(2021, 12, 15)};
  EXPECT_EQ(read_file(dir / "did" / "did.json"), dump(json(eco::did_estimate(panel, spec))));
  const auto manifest = read_json(dir / "did" / "manifest.json");
  EXPECT_EQ(manifest["parameters"]["control"].size(), cs.control.size());
}

TEST(CliAnalyze, DidExplicitGroupsAndPretrends) {
  TempDir dir;
  ASSERT_EQ(run_cli({"simulate", config_path("demo.yaml"), "--engine", "synth", "--out", (dir / "sim").string(),
                     "--quiet"}).code, 0);
  const auto panel_path = (dir / "sim" / "panel.csv").string();
  auto r = run_cli({"analyze", "did", panel_path, "--treated-set", "sink_round_1", "--control-set",
                    "non_sink_high_level", "--implementation", "2021-12-09", "--se", "cluster", "--out",
                    (dir / "did").string(), "--quiet"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto did = read_json(dir / "did" / "did.json");
  EXPECT_NEAR(did["estimate"].get<double>(), 0.07, 0.03);
  EXPECT_FALSE(std::filesystem::exists(dir / "did" / "control_set.json"));

  r = run_cli({"analyze", "pretrends", panel_path, "--treated-set", "sink_round_1", "--control-set",
               "non_sink_high_level", "--implementation", "2021-12-09", "--start", "2021-11-09", "--out",
               (dir / "pre").string(), "--quiet"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Panel panel = ingest::load_panel_csv(panel_path);
  eco::PretrendsSpec spec;
  spec.treated = panel.metadata().item_sets.at("sink_round_1");
  spec.control = panel.metadata().item_sets.at("non_sink_high_level");
  spec.implementation = make_date(2021, 12, 9);
  spec.window_start = make_date(2021, 11, 9);
  EXPECT_EQ(read_file(dir / "pre" / "pretrends.json"), dump(json(eco::pretrends_test(panel, spec))));
}

TEST(CliAnalyze, IndexMatchesLibrary) {
  TempDir dir;
  const auto panel_path = write_synth(dir, kRdYaml);
  ASSERT_EQ(run_cli({"analyze", "index", panel_path.string(), "--out", (dir / "idx").string(), "--quiet"}).code, 0);
  const Panel panel = ingest::load_panel_csv(panel_path);
  const auto series = eco::price_index(panel, panel.items(), make_date(2021, 11, 1), {});
  EXPECT_EQ(read_file(dir / "idx" / "index.json"), dump(json(series)));
}

TEST(CliAnalyze, BreaksMatchLibrary) {
  TempDir dir;
  const auto off = fixture_path("gp_official.csv");
  const auto sel = fixture_path("gp_sellers.csv");
  const auto r = run_cli({"analyze", "breaks", "--official", off.string(), "--sellers", sel.string(), "--source",
                          "illicit_mean", "--out", dir.path().string(), "--quiet"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto data = ingest::load_gp_prices(off, sel);
  eco::BreakTestOptions opts;
  opts.series_id = "illicit_mean";
  const auto expected = eco::break_test(ingest::gp_series(data, "illicit_mean"), opts);
  const auto arr = read_json(dir / "breaks.json");
  ASSERT_EQ(arr.size(), 1u);
  EXPECT_EQ(arr[0], json(expected));
  EXPECT_FALSE(arr[0]["break_detected"].get<bool>());
}

TEST(CliAnalyze, EstimationErrorExits3AndWritesErrorRecord) {
  TempDir dir;
  const auto panel_path = write_synth(dir, kRdYaml);
  const auto r = run_cli({"--json-errors", "analyze", "rd", panel_path.string(), "--cutoff", "100000", "--out",
                          (dir / "rd").string()});
  EXPECT_EQ(r.code, 3);
  const auto err = json::parse(r.err)["error"];
  EXPECT_EQ(err["code"], "InsufficientSupport");
  const auto record = read_json(dir / "rd" / "error.json");
  EXPECT_EQ(record["error"]["code"], "InsufficientSupport");
  EXPECT_FALSE(std::filesystem::exists(dir / "rd" / "rd.json"));
}

TEST(CliAnalyze, GroupErrors) {
  TempDir dir;
  const auto panel_path = write_synth(dir, kRdYaml).string();
  EXPECT_EQ(run_cli({"analyze", "did", panel_path, "--treated", "1,2", "--out", (dir / "a").string()}).code, 2);
  EXPECT_EQ(run_cli({"analyze", "did", panel_path, "--treated", "1,2", "--control", "2,3", "--implementation",
                     "2021-11-15", "--out", (dir / "b").string()}).code, 3);
  EXPECT_EQ(run_cli({"analyze", "did", panel_path, "--treated-set", "nope", "--control", "3,4",
                     "--implementation", "2021-11-15", "--out", (dir / "c").string()}).code, 2);
  EXPECT_EQ(run_cli({"analyze", "rd", (dir / "missing.csv").string(), "--out", (dir / "d").string()}).code, 4);
}
