#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "gelab/econometrics/errors.hpp"
#include "gelab/exchange/types.hpp"
#include "gelab/ingest/errors.hpp"
#include "gelab/simkit/config.hpp"

namespace gelab::cli {

using nlohmann::json;

namespace {

int exit_code_for(const Error& e) {
  if (const auto* u = dynamic_cast<const UsageError*>(&e)) return u->exit_code();
  if (dynamic_cast<const simkit::ConfigError*>(&e)) return kConfigError;
  if (dynamic_cast<const econometrics::EstimationError*>(&e)) return kAnalysisError;
  if (dynamic_cast<const ingest::IngestError*>(&e)) return kIngestError;
  // Panel validation failures come from input data.
  return kIngestError;
}

void report_error(const Error& e, int code, const GlobalOptions& g, std::ostream& err) {
  json details = json::object();
  for (const auto& [k, v] : e.details()) details[k] = v;
  json record{{"error", {{"code", e.code()}, {"message", e.what()}, {"exit_code", code}, {"details", details}}}};
  if (const auto* c = dynamic_cast<const simkit::ConfigError*>(&e)) {
    json diags = json::array();
    for (const auto& d : c->diagnostics()) diags.push_back({{"field", d.field}, {"line", d.line}, {"message", d.message}});
    record["error"]["diagnostics"] = diags;
  }
  if (g.json_errors) {
    err << record.dump() << '\n';
  } else {
    err << "gelab: " << e.code() << ": " << e.what() << '\n';
    if (const auto* c = dynamic_cast<const simkit::ConfigError*>(&e)) {
      for (const auto& d : c->diagnostics()) {
        err << "  " << d.field;
        if (d.line > 0) err << " (line " << d.line << ")";
        err << ": " << d.message << '\n';
      }
    } else {
      for (const auto& [k, v] : e.details()) err << "  " << k << ": " << v << '\n';
    }
  }
  if (g.write_error_file && !g.out.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(g.out, ec);
    std::ofstream f(std::filesystem::path(g.out) / "error.json");
    if (f) f << record.dump(2) << '\n';
  }
}

void add_window(CLI::App* app, AnalyzeOptions& o) {
  app->add_option("--start", o.start, "First date of the estimation window (YYYY-MM-DD)");
  app->add_option("--end", o.end, "Last date of the estimation window (YYYY-MM-DD)");
}

void add_groups(CLI::App* app, AnalyzeOptions& o) {
  app->add_option("--treated", o.treated, "Treated item ids, comma separated");
  app->add_option("--treated-file", o.treated_file, "File listing treated item ids");
  app->add_option("--treated-set", o.treated_set, "Named item set from the panel metadata");
  app->add_option("--control", o.control, "Control item ids, comma separated");
  app->add_option("--control-file", o.control_file, "File listing control item ids");
  app->add_option("--control-set", o.control_set, "Named item set from the panel metadata");
  app->add_option("--implementation", o.implementation, "Intervention date (YYYY-MM-DD)")->required();
  app->add_option("--outcome", o.outcome, "price or volume")->check(CLI::IsMember({"price", "volume"}));
  app->add_option("--level", o.level, "Confidence level")->check(CLI::Range(0.5, 0.9999));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"gelab: simulate a taxed, sinked item exchange and estimate policy effects"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  std::uint64_t seed = 0;
  app.add_option("--out", g.out, "Output directory")->default_val(".");
  auto* seed_opt = app.add_option("--seed", seed, "Override the scenario seed");
  app.add_flag("--quiet", g.quiet, "Suppress progress output");
  app.add_flag("--json-errors", g.json_errors, "Print errors as one JSON object on stderr");

  std::function<void()> action;

  SimulateOptions sim;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario and write panel, logs and manifest");
  simulate->add_option("config", sim.config_path, "Scenario YAML file")->required();
  simulate->add_option("--engine", sim.engine, "agent (exchange) or synth (direct DGP sampling)")
      ->check(CLI::IsMember({"agent", "synth"}));
  simulate->callback([&] { action = [&] { cmd_simulate(sim, g, out); }; });

  auto* analyze = app.add_subcommand("analyze", "Run one estimator on a panel");
  analyze->require_subcommand(1);
  analyze->fallthrough();
  AnalyzeOptions an;

  auto* index = analyze->add_subcommand("index", "Volume-weighted base-100 price index");
  index->add_option("panel", an.panel_path, "Panel CSV")->required();
  index->add_option("--items", an.treated, "Group item ids, comma separated (default: all)");
  index->add_option("--items-file", an.treated_file, "File listing group item ids");
  index->add_option("--item-set", an.treated_set, "Named item set from the panel metadata");
  index->add_option("--base-date", an.base_date, "First day of the base week (default: window start)");
  add_window(index, an);
  index->callback([&] { action = [&] { cmd_analyze_index(an, g, out); }; });

  auto* rd = analyze->add_subcommand("rd", "Sharp regression discontinuity in log volume at a price cutoff");
  rd->add_option("panel", an.panel_path, "Panel CSV")->required();
  rd->add_option("--cutoff", an.cutoff, "Price cutoff in GP")->default_val(100.0);
  rd->add_option("--bandwidth", an.bandwidth, "Bandwidth in GP")->default_val(20.0);
  rd->add_option("--order", an.order, "Polynomial order")->default_val(1);
  rd->add_option("--kernel", an.kernel, "triangular, uniform or epanechnikov")
      ->check(CLI::IsMember({"triangular", "uniform", "epanechnikov"}));
  rd->add_option("--bins", an.bins, "Bins per side in the plot")->default_val(20);
  rd->add_option("--level", an.level, "Confidence level")->check(CLI::Range(0.5, 0.9999));
  add_window(rd, an);
  rd->callback([&] { action = [&] { cmd_analyze_rd(an, g, out); }; });

  auto* rk = analyze->add_subcommand("rk", "Regression kink in log volume at the tax cap");
  rk->add_option("panel", an.panel_path, "Panel CSV")->required();
  rk->add_option("--kink", an.kink, "Kink price in GP")->default_val(5e8);
  rk->add_option("--lower", an.lower, "Lower price restriction in GP")->default_val(1e8);
  rk->add_option("--upper", an.upper, "Upper price restriction in GP (default: symmetric)");
  rk->add_option("--price-unit", an.price_unit, "GP per unit of the running variable")->default_val(1e6);
  rk->add_option("--order", an.order, "Polynomial order")->default_val(1);
  rk->add_option("--kernel", an.kernel, "triangular, uniform or epanechnikov")
      ->check(CLI::IsMember({"triangular", "uniform", "epanechnikov"}));
  rk->add_option("--bins", an.bins, "Bins per side in the plot")->default_val(20);
  rk->add_option("--level", an.level, "Confidence level")->check(CLI::Range(0.5, 0.9999));
  add_window(rk, an);
  rk->callback([&] { action = [&] { cmd_analyze_rk(an, g, out); }; });

  auto* did = analyze->add_subcommand("did", "Two-group difference-in-differences with item fixed effects");
  did->add_option("panel", an.panel_path, "Panel CSV")->required();
  add_groups(did, an);
  add_window(did, an);
  did->add_flag("--auto-control", an.auto_control, "Build the control set from price correlations");
  did->add_option("--corr-threshold", an.corr_threshold, "Maximum |correlation| with any treated item")
      ->default_val(0.1);
  did->add_option("--price-floor", an.price_floor, "Universe price floor in GP")->default_val(1e5);
  did->add_option("--corr-start", an.corr_start, "First date of the correlation window");
  did->add_option("--corr-end", an.corr_end, "Last date of the correlation window (default: day before implementation)");
  did->add_option("--se", an.se, "hc1 or cluster")->check(CLI::IsMember({"hc1", "cluster"}));
  did->add_option("--method", an.method, "within or dummies")->check(CLI::IsMember({"within", "dummies"}));
  did->callback([&] { action = [&] { cmd_analyze_did(an, g, out); }; });

  auto* pre = analyze->add_subcommand("pretrends", "Pre-intervention trend comparison with weekly means");
  pre->add_option("panel", an.panel_path, "Panel CSV")->required();
  add_groups(pre, an);
  pre->add_option("--start", an.start, "First day of the pre-window")->required();
  pre->add_option("--plot-end", an.end, "Emit weekly means up to this date");
  pre->add_option("--se", an.se, "hc1 or cluster")->check(CLI::IsMember({"hc1", "cluster"}));
  pre->callback([&] { action = [&] { cmd_analyze_pretrends(an, g, out); }; });

  auto* breaks = analyze->add_subcommand("breaks", "Mean and variance break tests on GP price series");
  breaks->add_option("--official", an.official_path, "Official price CSV (date,source,usd_per_million)");
  breaks->add_option("--sellers", an.sellers_path, "Illicit seller price CSV (date,source,usd_per_million)");
  breaks->add_option("--source", an.sources, "Series to test (default: every source plus illicit_mean)");
  breaks->add_option("--known-date", an.known_date, "Test a break at this date instead of scanning");
  breaks->add_option("--trim", an.trim, "Fraction trimmed from each end when scanning")->default_val(0.15);
  breaks->add_option("--level", an.break_level, "Significance level")->default_val(0.05);
  breaks->callback([&] { action = [&] { cmd_analyze_breaks(an, g, out); }; });

  auto* ing = app.add_subcommand("ingest", "Turn external data into a canonical panel");
  ing->require_subcommand(1);
  ing->fallthrough();
  IngestOptions io;
  auto* api = ing->add_subcommand("api", "Fetch daily series from the price API");
  api->add_option("--items", io.items, "Item ids, comma separated");
  api->add_option("--items-file", io.items_file, "File listing item ids");
  api->add_option("--base-url", io.base_url, "API base URL (env GELAB_BASE_URL)");
  api->add_option("--cache-dir", io.cache_dir, "Response cache directory (env GELAB_CACHE_DIR)");
  api->add_option("--user-agent", io.user_agent, "Descriptive User-Agent sent with every request");
  api->add_option("--interval-ms", io.interval_ms, "Minimum gap between requests")->default_val(1000);
  api->add_option("--step", io.step, "API timestep")->default_val("24h");
  api->add_option("--start", io.start, "First date kept");
  api->add_option("--end", io.end, "Last date kept");
  api->callback([&] { action = [&] { cmd_ingest_api(io, g, out); }; });

  auto* csv = ing->add_subcommand("csv", "Validate a panel CSV and write it in canonical form");
  csv->add_option("panel", io.panel_path, "Panel CSV")->required();
  csv->callback([&] { action = [&] { cmd_ingest_csv(io, g, out); }; });

  auto* gp = ing->add_subcommand("gp", "Load official and illicit GP price series");
  gp->add_option("--official", io.official_path, "Official price CSV");
  gp->add_option("--sellers", io.sellers_path, "Illicit seller price CSV");
  gp->callback([&] { action = [&] { cmd_ingest_gp(io, g, out); }; });

  MonteCarloOptions mc;
  auto* monte = app.add_subcommand("montecarlo", "Replicate an estimator over independently seeded panels");
  monte->add_option("config", mc.config_path, "Scenario YAML file")->required();
  monte->add_option("--design", mc.design, "rd, rk or did")->required()->check(CLI::IsMember({"rd", "rk", "did"}));
  monte->add_option("--reps", mc.reps, "Number of replications")->default_val(200);
  monte->add_option("--threads", mc.threads, "Worker threads")->default_val(1);
  monte->add_option("--engine", mc.engine, "synth or agent")->check(CLI::IsMember({"agent", "synth"}));
  monte->add_option("--cutoff", mc.cutoff, "RD cutoff")->default_val(100.0);
  monte->add_option("--bandwidth", mc.bandwidth, "RD bandwidth")->default_val(20.0);
  monte->add_option("--kink", mc.kink, "RK kink")->default_val(5e8);
  monte->add_option("--lower", mc.lower, "RK lower restriction")->default_val(1e8);
  monte->add_option("--price-unit", mc.price_unit, "RK price unit")->default_val(1e6);
  monte->add_option("--treated-set", mc.treated_set, "DiD treated item set")->default_val("treated");
  monte->add_option("--control-set", mc.control_set, "DiD control item set")->default_val("non_sink_high_level");
  monte->add_option("--implementation", mc.implementation, "DiD intervention date (default: effect date)");
  monte->add_option("--se", mc.se, "hc1 or cluster")->check(CLI::IsMember({"hc1", "cluster"}));
  monte->callback([&] { action = [&] { cmd_montecarlo(mc, g, out); }; });

  std::string report_dir;
  auto* report = app.add_subcommand("report", "Write an HTML index of a bundle directory");
  report->add_option("dir", report_dir, "Bundle directory")->required();
  report->callback([&] { action = [&] { cmd_report(report_dir, g, out); }; });

  std::vector<std::string> argv_store{"gelab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    if (g.json_errors) {
      err << json{{"error", {{"code", "UsageError"}, {"message", e.what()}, {"exit_code", int(kConfigError)},
                             {"details", json::object()}}}}
                 .dump()
          << '\n';
    } else {
      err << "gelab: " << e.what() << "\nRun with --help for usage.\n";
    }
    return kConfigError;
  }
  if (seed_opt->count() > 0) g.seed = seed;
  if (!action) return kConfigError;

  try {
    action();
  } catch (const Error& e) {
    const int code = exit_code_for(e);
    report_error(e, code, g, err);
    return code;
  } catch (const std::exception& e) {
    report_error(Error("Failure", e.what()), kFailure, g, err);
    return kFailure;
  }
  return kOk;
}

}  // namespace gelab::cli
