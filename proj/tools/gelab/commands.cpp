#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bundle.hpp"
#include "cli.hpp"
#include "gelab/csv.hpp"
#include "gelab/econometrics/break_test.hpp"
#include "gelab/econometrics/correlation.hpp"
#include "gelab/econometrics/did.hpp"
#include "gelab/econometrics/plot_data.hpp"
#include "gelab/econometrics/pretrends.hpp"
#include "gelab/econometrics/price_index.hpp"
#include "gelab/econometrics/rd.hpp"
#include "gelab/econometrics/rk.hpp"
#include "gelab/econometrics/serialize.hpp"
#include "gelab/exchange/summary.hpp"
#include "gelab/ingest/api_client.hpp"
#include "gelab/ingest/gp_prices.hpp"
#include "gelab/ingest/panel_csv.hpp"
#include "gelab/simkit/replicate.hpp"
#include "gelab/simkit/scenario.hpp"
#include "gelab/simkit/synth.hpp"
#include "svg.hpp"

namespace gelab::cli {

using nlohmann::json;
namespace eco = gelab::econometrics;

namespace {

std::string read_text(const std::filesystem::path& p, int exit_code) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + p.string() + "'", exit_code, {{"path", p.string()}});
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string table_text(const CsvTable& t) {
  std::ostringstream ss;
  t.write(ss);
  return ss.str();
}

std::optional<Date> opt_date(const std::string& text, const std::string& flag) {
  if (text.empty()) return std::nullopt;
  const auto d = try_parse_date(text);
  if (!d) throw UsageError(flag + " expects YYYY-MM-DD, got '" + text + "'", kConfigError, {{"flag", flag}});
  return d;
}

Date req_date(const std::string& text, const std::string& flag) {
  const auto d = opt_date(text, flag);
  if (!d) throw UsageError(flag + " is required", kConfigError, {{"flag", flag}});
  return *d;
}

DateWindow window_of(const AnalyzeOptions& o) { return {opt_date(o.start, "--start"), opt_date(o.end, "--end")}; }

eco::Kernel kernel_of(const std::string& k) {
  if (k == "uniform") return eco::Kernel::uniform;
  if (k == "epanechnikov") return eco::Kernel::epanechnikov;
  return eco::Kernel::triangular;
}

std::vector<ItemId> resolve_group(const Panel& panel, const std::string& list, const std::string& file,
                                  const std::string& set, const std::string& what) {
  std::set<ItemId> ids;
  for (auto v : parse_id_list(list)) ids.emplace(v);
  if (!file.empty()) {
    for (auto v : parse_id_list(read_text(file, kConfigError))) ids.emplace(v);
  }
  if (!set.empty()) {
    const auto& sets = panel.metadata().item_sets;
    const auto it = sets.find(set);
    if (it == sets.end()) {
      throw UsageError("panel metadata has no item set '" + set + "'", kConfigError, {{"flag", "--" + what + "-set"}});
    }
    ids.insert(it->second.begin(), it->second.end());
  }
  return {ids.begin(), ids.end()};
}

Panel load_panel(const std::string& path, Bundle& bundle) {
  Panel p = ingest::load_panel_csv(path);
  bundle.input("panel", path);
  return p;
}

json ids_json(const std::vector<ItemId>& ids) {
  json a = json::array();
  for (auto id : ids) a.push_back(id.value);
  return a;
}

void say(const GlobalOptions& g, std::ostream& out, const std::string& line) {
  if (!g.quiet) out << line << '\n';
}

std::string fmt(double v) { return format_double(v); }

std::string design_plot_csv(const eco::DesignPlotData& d) {
  CsvTable t{{"kind", "x", "y", "n"}, {}};
  for (const auto& b : d.bins) t.rows.push_back({"bin", fmt(b.x), fmt(b.mean), std::to_string(b.n)});
  for (const auto& p : d.fit_left) t.rows.push_back({"fit_left", fmt(p.x), fmt(p.y), ""});
  for (const auto& p : d.fit_right) t.rows.push_back({"fit_right", fmt(p.x), fmt(p.y), ""});
  return table_text(t);
}

std::string design_plot_svg(const eco::DesignPlotData& d, const std::string& title, const std::string& x_label) {
  SvgPlot plot{title, x_label, "log volume", {}, d.threshold};
  PlotSeries bins{"binned mean", PlotSeries::Kind::points, "#555555", {}, {}};
  for (const auto& b : d.bins) bins.points.push_back({b.x, b.mean});
  PlotSeries left{"fit below", PlotSeries::Kind::line, "#1f77b4", {}, {}};
  for (const auto& p : d.fit_left) left.points.push_back({p.x, p.y});
  PlotSeries right{"fit above", PlotSeries::Kind::line, "#d62728", {}, {}};
  for (const auto& p : d.fit_right) right.points.push_back({p.x, p.y});
  plot.series = {bins, left, right};
  return plot.render();
}

OutcomeVar outcome_of(const std::string& s) { return s == "volume" ? OutcomeVar::volume : OutcomeVar::price; }

}  // namespace

std::vector<std::int64_t> parse_id_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    char* end = nullptr;
    const long long v = std::strtoll(token.c_str(), &end, 10);
    if (*end != '\0' || v <= 0) throw UsageError("invalid item id '" + token + "'", kConfigError, {{"value", token}});
    out.push_back(v);
    token.clear();
  };
  for (char c : text) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      token += c;
    }
  }
  flush();
  return out;
}

void cmd_simulate(const SimulateOptions& o, GlobalOptions& g, std::ostream& out) {
  const std::string text = [&] {
    std::ifstream in(o.config_path, std::ios::binary);
    if (!in) {
      throw simkit::ConfigError({{"<file>", 0, "cannot open config file '" + o.config_path + "'"}}, o.config_path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }();
  auto config = simkit::parse_scenario_config(text, o.config_path);
  if (g.seed) config.rng_seed = *g.seed;
  simkit::validate(config);

  Bundle bundle(g.out, "simulate");
  bundle.parameters() = {{"engine", o.engine}, {"seed", config.rng_seed}};
  bundle.set("config_text", text);
  bundle.set("config_sha256", sha256_hex(text));
  bundle.set("horizon", {{"start", format_date(config.start_date)},
                         {"end", format_date(add_days(config.start_date, config.n_days - 1))}});
  bundle.write("config.yaml", text);

  if (o.engine == "synth") {
    const Panel panel = simkit::synth_panel(config);
    ingest::write_panel_csv(bundle.path("panel.csv"), panel);
    bundle.record("panel.csv");
    bundle.record("panel.csv.meta.json");
    say(g, out, "simulated " + std::to_string(panel.size()) + " item-days (synth) into " + g.out);
  } else {
    const auto result = simkit::run_scenario(config);
    ingest::write_panel_csv(bundle.path("panel.csv"), result.panel);
    bundle.record("panel.csv");
    bundle.record("panel.csv.meta.json");
    std::ostringstream trades, removals;
    exchange::write_trade_log_csv(trades, result.trades);
    exchange::write_removal_log_csv(removals, result.removals);
    bundle.write("trades.csv", trades.str());
    bundle.write("removals.csv", removals.str());
    json rejections = json::object();
    for (const auto& [code, n] : result.rejections) rejections[code] = n;
    json items_deposited = json::object(), items_removed = json::object();
    for (const auto& [id, n] : result.flows.items_deposited) items_deposited[std::to_string(id.value)] = n;
    for (const auto& [id, n] : result.flows.items_removed) items_removed[std::to_string(id.value)] = n;
    json summary{{"orders_submitted", result.orders_submitted},
                 {"trades", result.trades.size()},
                 {"removals", result.removals.size()},
                 {"final_coffer", result.final_coffer},
                 {"gp_deposited", result.flows.gp_deposited},
                 {"taxes_collected", result.flows.taxes_collected},
                 {"sink_spent", result.flows.sink_spent},
                 {"items_deposited", items_deposited},
                 {"items_removed", items_removed},
                 {"rejections", rejections}};
    bundle.write("summary.json", summary.dump(2) + "\n");
    say(g, out, "simulated " + std::to_string(result.trades.size()) + " trades, " +
                    std::to_string(result.panel.size()) + " item-days into " + g.out);
  }
  bundle.finish();
}

void cmd_analyze_index(const AnalyzeOptions& o, GlobalOptions& g, std::ostream& out) {
  g.write_error_file = true;
  Bundle bundle(g.out, "analyze index");
  const Panel panel = load_panel(o.panel_path, bundle);
  auto group = resolve_group(panel, o.treated, o.treated_file, o.treated_set, "item");
  if (group.empty()) group = panel.items();
  const auto window = window_of(o);
  Date base;
  if (!o.base_date.empty()) {
    base = req_date(o.base_date, "--base-date");
  } else if (window.start) {
    base = *window.start;
  } else if (panel.first_date()) {
    base = *panel.first_date();
  }
  const auto series = eco::price_index(panel, group, base, window);
  bundle.parameters() = {{"base_date", format_date(base)}, {"group", ids_json(group)}, {"start", o.start}, {"end", o.end}};
  bundle.write("index.json", json(series).dump(2) + "\n");
  bundle.write("index.csv", table_text(eco::to_csv(series)));

  SvgPlot plot{"Price index (base week = 100)", "week", "index", {}, std::nullopt};
  PlotSeries line{"index", PlotSeries::Kind::line, "#1f77b4", {}, {}};
  for (const auto& p : series.points) line.points.push_back({static_cast<double>(p.week), p.index});
  plot.series = {line};
  bundle.write("index.svg", plot.render());
  bundle.finish();
  say(g, out, "price index over " + std::to_string(series.points.size()) + " weeks written to " + g.out);
}

void cmd_analyze_rd(const AnalyzeOptions& o, GlobalOptions& g, std::ostream& out) {
  g.write_error_file = true;
  Bundle bundle(g.out, "analyze rd");
  const Panel panel = load_panel(o.panel_path, bundle);
  eco::RdSpec spec;
  spec.cutoff = o.cutoff;
  spec.bandwidth = o.bandwidth;
  spec.order = o.order;
  spec.kernel = kernel_of(o.kernel);
  spec.window = window_of(o);
  spec.level = o.level;
  const auto est = eco::rd_estimate(panel, spec);
  bundle.parameters() = {{"cutoff", o.cutoff}, {"bandwidth", o.bandwidth}, {"order", o.order}, {"kernel", o.kernel},
                         {"start", o.start}, {"end", o.end}, {"level", o.level}};
  bundle.write("rd.json", json(est).dump(2) + "\n");
  bundle.write("rd.csv", table_text(eco::to_csv(est)));
  const auto plot = eco::rd_plot_data(panel, est, o.bins);
  bundle.write("rd_plot.csv", design_plot_csv(plot));
  bundle.write("rd.svg", design_plot_svg(plot, "Discontinuity at " + fmt(o.cutoff) + " GP", "price (GP)"));
  bundle.finish();
  say(g, out, "rd beta = " + fmt(est.beta) + " (se " + fmt(est.se) + ")");
}

void cmd_analyze_rk(const AnalyzeOptions& o, GlobalOptions& g, std::ostream& out) {
  g.write_error_file = true;
  Bundle bundle(g.out, "analyze rk");
  const Panel panel = load_panel(o.panel_path, bundle);
  eco::RkSpec spec;
  spec.kink = o.kink;
  spec.lower = o.lower;
  if (o.upper > 0.0) spec.upper = o.upper;
  spec.price_unit = o.price_unit;
  spec.order = o.order;
  spec.kernel = kernel_of(o.kernel);
  spec.window = window_of(o);
  spec.level = o.level;
  const auto est = eco::rk_estimate(panel, spec);
  bundle.parameters() = {{"kink", o.kink}, {"lower", o.lower}, {"upper", o.upper}, {"price_unit", o.price_unit},
                         {"order", o.order}, {"kernel", o.kernel}, {"start", o.start}, {"end", o.end},
                         {"level", o.level}};
  bundle.write("rk.json", json(est).dump(2) + "\n");
  bundle.write("rk.csv", table_text(eco::to_csv(est)));
  const auto plot = eco::rk_plot_data(panel, est, o.bins);
  bundle.write("rk_plot.csv", design_plot_csv(plot));
  bundle.write("rk.svg", design_plot_svg(plot, "Kink at " + fmt(o.kink) + " GP",
                                         "price (units of " + fmt(o.price_unit) + " GP)"));
  bundle.finish();
  say(g, out, "rk delta = " + fmt(est.delta) + " (se " + fmt(est.se) + ")");
}

void cmd_analyze_did(const AnalyzeOptions& o, GlobalOptions& g, std::ostream& out) {
  g.write_error_file = true;
  Bundle bundle(g.out, "analyze did");
  const Panel panel = load_panel(o.panel_path, bundle);
  eco::DidSpec spec;
  spec.treated = resolve_group(panel, o.treated, o.treated_file, o.treated_set, "treated");
  spec.implementation = req_date(o.implementation, "--implementation");
  spec.window = {opt_date(o.start, "--start"), opt_date(o.end.empty() ? "2022-01-01" : o.end, "--end")};
  spec.outcome = outcome_of(o.outcome);
  spec.se = o.se == "cluster" ? eco::SeType::cluster_item : eco::SeType::hc1;
  spec.method = o.method == "dummies" ? eco::DidMethod::dummies : eco::DidMethod::within;
  spec.level = o.level;
  if (spec.treated.empty()) throw UsageError("no treated items given", kConfigError, {{"flag", "--treated"}});

  json params{{"treated", ids_json(spec.treated)}, {"implementation", o.implementation}, {"start", o.start},
              {"end", o.end.empty() ? "2022-01-01" : o.end}, {"outcome", o.outcome}, {"se", eco::to_string(spec.se)},
              {"method", o.method}, {"level", o.level}, {"auto_control", o.auto_control}};
  if (o.auto_control) {
    eco::ControlSetConfig cc;
    cc.universe = resolve_group(panel, o.control, o.control_file, o.control_set, "control");
    if (!cc.universe.empty()) {
      cc.universe.insert(cc.universe.end(), spec.treated.begin(), spec.treated.end());
      std::sort(cc.universe.begin(), cc.universe.end());
      cc.universe.erase(std::unique(cc.universe.begin(), cc.universe.end()), cc.universe.end());
    }
    cc.price_floor = o.price_floor;
    cc.sinked = spec.treated;
    cc.threshold = o.corr_threshold;
    cc.window = {opt_date(o.corr_start, "--corr-start"),
                 o.corr_end.empty() ? std::optional(add_days(spec.implementation, -1)) : opt_date(o.corr_end, "--corr-end")};
    cc.intervention_date = spec.implementation;
    const auto cs = eco::build_control_set(panel, cc);
    spec.control = cs.control;
    bundle.write("control_set.json", json(cs).dump(2) + "\n");
    params["corr_threshold"] = o.corr_threshold;
    params["price_floor"] = o.price_floor;
    params["corr_start"] = o.corr_start;
    params["corr_end"] = cc.window.end ? format_date(*cc.window.end) : "";
  } else {
    spec.control = resolve_group(panel, o.control, o.control_file, o.control_set, "control");
    if (spec.control.empty()) {
      throw UsageError("no control items given; pass --control, --control-file, --control-set or --auto-control",
                       kConfigError, {{"flag", "--control"}});
    }
  }
  params["control"] = ids_json(spec.control);
  bundle.parameters() = params;

  const auto est = eco::did_estimate(panel, spec);
  bundle.write("did.json", json(est).dump(2) + "\n");
  bundle.write("did.csv", table_text(eco::to_csv(est)));

  const auto plot = eco::did_plot_data(panel, est);
  CsvTable pt{{"week", "treated", "control", "counterfactual"}, {}};
  std::map<int, double> cf;
  for (const auto& p : plot.counterfactual) cf[static_cast<int>(p.x)] = p.y;
  SvgPlot svg{"Treated vs control, log " + o.outcome + " (weeks from implementation)", "week", "mean log " + o.outcome,
              {}, 0.0};
  PlotSeries tr{"treated", PlotSeries::Kind::line, "#d62728", {}, {}};
  PlotSeries co{"control", PlotSeries::Kind::line, "#1f77b4", {}, {}};
  PlotSeries cfs{"treated counterfactual", PlotSeries::Kind::interval, "#ff9896", {}, {}};
  for (const auto& w : plot.weekly) {
    const auto c = cf.find(w.week);
    pt.rows.push_back({std::to_string(w.week), w.has_treated ? fmt(w.treated) : "", w.has_control ? fmt(w.control) : "",
                       c == cf.end() ? "" : fmt(c->second)});
    if (w.has_treated) tr.points.push_back({static_cast<double>(w.week), w.treated});
    if (w.has_control) co.points.push_back({static_cast<double>(w.week), w.control});
    if (c != cf.end() && w.has_treated) {
      cfs.points.push_back({static_cast<double>(w.week), c->second});
      cfs.bounds.push_back({w.treated - plot.ci_high, w.treated - plot.ci_low});
    }
  }
  svg.series = {tr, co, cfs};
  bundle.write("did_plot.csv", table_text(pt));
  bundle.write("did.svg", svg.render());
  bundle.finish();
  say(g, out, "did theta = " + fmt(est.theta) + " (se " + fmt(est.se_theta) + ", n " + std::to_string(est.n_obs) + ")");
}

void cmd_analyze_pretrends(const AnalyzeOptions& o, GlobalOptions& g, std::ostream& out) {
  g.write_error_file = true;
  Bundle bundle(g.out, "analyze pretrends");
  const Panel panel = load_panel(o.panel_path, bundle);
  eco::PretrendsSpec spec;
  spec.treated = resolve_group(panel, o.treated, o.treated_file, o.treated_set, "treated");
  spec.control = resolve_group(panel, o.control, o.control_file, o.control_set, "control");
  spec.implementation = req_date(o.implementation, "--implementation");
  spec.window_start = req_date(o.start, "--start");
  spec.outcome = outcome_of(o.outcome);
  spec.se = o.se == "hc1" ? eco::SeType::hc1 : eco::SeType::cluster_item;
  spec.level = o.level;
  spec.plot_end = opt_date(o.end, "--plot-end");
  bundle.parameters() = {{"treated", ids_json(spec.treated)}, {"control", ids_json(spec.control)},
                         {"implementation", o.implementation}, {"start", o.start}, {"plot_end", o.end},
                         {"outcome", o.outcome}, {"se", eco::to_string(spec.se)}, {"level", o.level}};
  const auto res = eco::pretrends_test(panel, spec);
  bundle.write("pretrends.json", json(res).dump(2) + "\n");
  bundle.write("pretrends.csv", table_text(eco::to_csv(res)));

  CsvTable pt{{"week", "week_start", "group", "mean_log_outcome", "n"}, {}};
  PlotSeries tr{"treated", PlotSeries::Kind::line, "#d62728", {}, {}};
  PlotSeries co{"control", PlotSeries::Kind::line, "#1f77b4", {}, {}};
  for (const auto& w : res.weekly) {
    pt.rows.push_back({std::to_string(w.week), format_date(w.week_start), w.treated ? "treated" : "control",
                       fmt(w.mean_log_outcome), std::to_string(w.n)});
    (w.treated ? tr : co).points.push_back({static_cast<double>(w.week), w.mean_log_outcome});
  }
  SvgPlot svg{"Weekly mean log " + o.outcome + " before the intervention", "week (0 = implementation)",
              "mean log " + o.outcome, {tr, co}, 0.0};
  bundle.write("pretrends_plot.csv", table_text(pt));
  bundle.write("pretrends.svg", svg.render());
  bundle.finish();
  say(g, out, "pretrends slope difference = " + fmt(res.difference) + " (p " + fmt(res.p_value) + ")");
}

void cmd_analyze_breaks(const AnalyzeOptions& o, GlobalOptions& g, std::ostream& out) {
  g.write_error_file = true;
  if (o.official_path.empty() && o.sellers_path.empty()) {
    throw UsageError("pass --official and/or --sellers", kConfigError, {{"flag", "--official"}});
  }
  Bundle bundle(g.out, "analyze breaks");
  std::optional<std::filesystem::path> off, sel;
  if (!o.official_path.empty()) off = o.official_path, bundle.input("official", o.official_path);
  if (!o.sellers_path.empty()) sel = o.sellers_path, bundle.input("sellers", o.sellers_path);
  const auto data = ingest::load_gp_prices(off, sel);

  std::vector<std::string> sources = o.sources;
  if (sources.empty()) {
    for (const auto& s : data.summary.sources) sources.push_back(s.source);
    if (!data.illicit.empty()) sources.push_back("illicit_mean");
  }
  eco::BreakTestOptions opts;
  opts.known_date = opt_date(o.known_date, "--known-date");
  opts.trim = o.trim;
  opts.level = o.break_level;

  std::vector<eco::BreakTestResult> results;
  SvgPlot svg{"GP price series (USD per million GP)", "days from first observation", "USD per million GP", {},
              std::nullopt};
  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                  "#bcbd22", "#17becf"};
  std::optional<Date> first;
  std::vector<std::vector<eco::SeriesPoint>> all;
  for (const auto& s : sources) {
    all.push_back(ingest::gp_series(data, s));
    if (all.back().empty()) throw UsageError("no series named '" + s + "'", kConfigError, {{"flag", "--source"}});
    if (!first || all.back().front().date < *first) first = all.back().front().date;
  }
  for (std::size_t k = 0; k < sources.size(); ++k) {
    opts.series_id = sources[k];
    results.push_back(eco::break_test(all[k], opts));
    PlotSeries line{sources[k], PlotSeries::Kind::line, kColors[k % 9], {}, {}};
    for (const auto& p : all[k]) line.points.push_back({static_cast<double>(days_between(*first, p.date)), p.value});
    svg.series.push_back(std::move(line));
  }
  if (opts.known_date) svg.vertical_line = static_cast<double>(days_between(*first, *opts.known_date));

  json arr = json::array();
  for (const auto& r : results) arr.push_back(r);
  bundle.parameters() = {{"sources", sources}, {"known_date", o.known_date}, {"trim", o.trim}, {"level", o.break_level}};
  bundle.write("breaks.json", arr.dump(2) + "\n");
  bundle.write("breaks.csv", table_text(eco::to_csv(results)));
  bundle.write("breaks.svg", svg.render());
  bundle.finish();
  std::size_t detected = 0;
  for (const auto& r : results) detected += r.break_detected ? 1 : 0;
  say(g, out, std::to_string(results.size()) + " series tested, " + std::to_string(detected) + " with a break");
}

void cmd_ingest_api(const IngestOptions& o, GlobalOptions& g, std::ostream& out) {
  ingest::ApiConfig cfg;
  const char* env_url = std::getenv("GELAB_BASE_URL");
  const char* env_cache = std::getenv("GELAB_CACHE_DIR");
  cfg.base_url = !o.base_url.empty() ? o.base_url : (env_url && *env_url ? env_url : ingest::kDefaultBaseUrl);
  cfg.cache_dir = !o.cache_dir.empty() ? o.cache_dir : (env_cache ? env_cache : "");
  cfg.user_agent = o.user_agent.empty() ? "gelab/" GELAB_VERSION " (virtual economy research tool)" : o.user_agent;
  cfg.min_interval = std::chrono::milliseconds(o.interval_ms);

  std::set<std::int64_t> ids;
  for (auto v : parse_id_list(o.items)) ids.insert(v);
  if (!o.items_file.empty()) {
    for (auto v : parse_id_list(read_text(o.items_file, kIngestError))) ids.insert(v);
  }
  if (ids.empty()) throw UsageError("no items given; pass --items or --items-file", kConfigError, {{"flag", "--items"}});
  const DateWindow range{opt_date(o.start, "--start"), opt_date(o.end, "--end")};

  ingest::ApiClient client(cfg);
  std::vector<PanelObservation> obs;
  for (auto id : ids) {
    auto part = client.fetch_timeseries(ItemId{id}, o.step, range);
    obs.insert(obs.end(), part.begin(), part.end());
  }
  PanelMetadata meta;
  meta.provenance = Provenance::ingested;
  meta.attributes["price"] = "avgLowPrice (instant-sell)";
  meta.attributes["volume"] = "highPriceVolume + lowPriceVolume";
  meta.attributes["step"] = o.step;
  const Panel panel(std::move(obs), std::move(meta));

  Bundle bundle(g.out, "ingest api");
  ingest::write_panel_csv(bundle.path("panel.csv"), panel);
  bundle.record("panel.csv");
  bundle.record("panel.csv.meta.json");
  std::vector<std::int64_t> id_list(ids.begin(), ids.end());
  bundle.parameters() = {{"items", id_list}, {"step", o.step}, {"start", o.start}, {"end", o.end},
                         {"interval_ms", o.interval_ms}, {"user_agent", cfg.user_agent}};
  bundle.set("fetch", {{"network_requests", client.network_requests()},
                       {"cache_hits", client.cache_hits()},
                       {"rows", panel.size()}});
  bundle.finish();
  say(g, out, "fetched " + std::to_string(panel.size()) + " rows (" + std::to_string(client.network_requests()) +
                  " requests, " + std::to_string(client.cache_hits()) + " cache hits)");
}

void cmd_ingest_csv(const IngestOptions& o, GlobalOptions& g, std::ostream& out) {
  const Panel panel = ingest::load_panel_csv(o.panel_path);
  Bundle bundle(g.out, "ingest csv");
  bundle.input("panel", o.panel_path);
  ingest::write_panel_csv(bundle.path("panel.csv"), panel);
  bundle.record("panel.csv");
  bundle.record("panel.csv.meta.json");
  bundle.finish();
  say(g, out, "validated " + std::to_string(panel.size()) + " rows");
}

void cmd_ingest_gp(const IngestOptions& o, GlobalOptions& g, std::ostream& out) {
  std::optional<std::filesystem::path> off, sel;
  if (!o.official_path.empty()) off = o.official_path;
  if (!o.sellers_path.empty()) sel = o.sellers_path;
  if (!off && !sel) throw UsageError("pass --official and/or --sellers", kConfigError, {{"flag", "--official"}});
  const auto data = ingest::load_gp_prices(off, sel);
  Bundle bundle(g.out, "ingest gp");
  if (off) bundle.input("official", *off);
  if (sel) bundle.input("sellers", *sel);

  CsvTable prices{{"date", "source", "usd_per_million", "official"}, {}};
  for (const auto* pts : {&data.official, &data.illicit}) {
    for (const auto& p : *pts) {
      prices.rows.push_back({format_date(p.date), p.source, fmt(p.usd_per_million), pts == &data.official ? "1" : "0"});
    }
  }
  CsvTable premium{{"date", "official", "illicit_mean", "premium"}, {}};
  for (const auto& p : data.summary.premium) {
    premium.rows.push_back({format_date(p.date), fmt(p.official), fmt(p.illicit_mean), fmt(p.premium)});
  }
  json sources = json::array();
  for (const auto& s : data.summary.sources) {
    sources.push_back({{"source", s.source}, {"official", s.official}, {"n", s.n}, {"mean", s.mean}, {"min", s.min},
                       {"max", s.max}});
  }
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json summary{{"sources", sources},
               {"official_mean", opt(data.summary.official_mean)},
               {"illicit_mean", opt(data.summary.illicit_mean)},
               {"illicit_min", opt(data.summary.illicit_min)},
               {"illicit_max", opt(data.summary.illicit_max)},
               {"premium_undefined", data.summary.premium_undefined},
               {"premium_dates", data.summary.premium.size()}};
  bundle.write("gp_prices.csv", table_text(prices));
  bundle.write("premium.csv", table_text(premium));
  bundle.write("gp_summary.json", summary.dump(2) + "\n");
  bundle.finish();
  say(g, out, "loaded " + std::to_string(data.official.size() + data.illicit.size()) + " GP price points");
}

void cmd_montecarlo(const MonteCarloOptions& o, GlobalOptions& g, std::ostream& out) {
  const std::string text = read_text(o.config_path, kConfigError);
  auto config = simkit::parse_scenario_config(text, o.config_path);
  if (g.seed) config.rng_seed = *g.seed;
  simkit::validate(config);

  const EffectKind kind = o.design == "rd" ? EffectKind::rd_step
                          : o.design == "rk" ? EffectKind::rk_slope
                                             : EffectKind::did_level;
  double truth = 0.0;
  std::optional<Date> effect_date;
  OutcomeVar outcome = OutcomeVar::price;
  for (const auto& e : config.injected_effects) {
    if (e.kind != kind) continue;
    truth += e.magnitude;
    if (!effect_date) effect_date = e.effect_date, outcome = e.outcome;
  }
  std::optional<Date> implementation = opt_date(o.implementation, "--implementation");
  if (!implementation) implementation = effect_date;
  if (o.design == "did" && !implementation) {
    throw UsageError("--implementation is required when the config has no did_level effect", kConfigError,
                     {{"flag", "--implementation"}});
  }

  struct Row {
    double estimate, se, lo, hi, p;
  };
  auto analysis = [&](const Panel& panel) -> Row {
    if (o.design == "rd") {
      eco::RdSpec s;
      s.cutoff = o.cutoff;
      s.bandwidth = o.bandwidth;
      const auto e = eco::rd_estimate(panel, s);
      return {e.beta, e.se, e.ci_low, e.ci_high, e.p_value};
    }
    if (o.design == "rk") {
      eco::RkSpec s;
      s.kink = o.kink;
      s.lower = o.lower;
      s.price_unit = o.price_unit;
      const auto e = eco::rk_estimate(panel, s);
      return {e.delta, e.se, e.ci_low, e.ci_high, e.p_value};
    }
    eco::DidSpec s;
    const auto& sets = panel.metadata().item_sets;
    const auto t = sets.find(o.treated_set);
    const auto c = sets.find(o.control_set);
    if (t == sets.end() || c == sets.end()) {
      throw UsageError("scenario has no item set '" + (t == sets.end() ? o.treated_set : o.control_set) + "'",
                       kConfigError);
    }
    s.treated = t->second;
    s.control = c->second;
    s.implementation = *implementation;
    s.outcome = outcome;
    s.se = o.se == "cluster" ? eco::SeType::cluster_item : eco::SeType::hc1;
    const auto e = eco::did_estimate(panel, s);
    return {e.theta, e.se_theta, e.ci_low, e.ci_high, e.p_value};
  };

  const auto reps = simkit::replicate(
      config, o.reps, analysis,
      {o.threads, o.engine == "agent" ? simkit::PanelSource::agent : simkit::PanelSource::synthetic});

  CsvTable table{{"index", "seed", "estimate", "se", "ci_low", "ci_high", "p_value", "covers", "rejects", "error"}, {}};
  std::size_t ok = 0, covers = 0, rejects = 0;
  double sum = 0.0, sumsq = 0.0;
  for (const auto& r : reps) {
    if (!r.ok()) {
      table.rows.push_back({std::to_string(r.index), std::to_string(r.seed), "", "", "", "", "", "", "", r.error_code});
      continue;
    }
    const auto& v = *r.value;
    const bool cov = v.lo <= truth && truth <= v.hi;
    const bool rej = v.p < 0.05;
    ++ok;
    covers += cov;
    rejects += rej;
    sum += v.estimate;
    sumsq += v.estimate * v.estimate;
    table.rows.push_back({std::to_string(r.index), std::to_string(r.seed), fmt(v.estimate), fmt(v.se), fmt(v.lo),
                          fmt(v.hi), fmt(v.p), cov ? "1" : "0", rej ? "1" : "0", ""});
  }
  const double n = static_cast<double>(ok);
  const double mean = ok ? sum / n : 0.0;
  json summary{{"design", o.design},
               {"truth", truth},
               {"replications", o.reps},
               {"succeeded", ok},
               {"failed", o.reps - ok},
               {"mean_estimate", mean},
               {"sd_estimate", ok > 1 ? std::sqrt(std::max(0.0, (sumsq - n * mean * mean) / (n - 1.0))) : 0.0},
               {"coverage", ok ? covers / n : 0.0},
               {"rejection_rate", ok ? rejects / n : 0.0}};

  Bundle bundle(g.out, "montecarlo");
  bundle.parameters() = {{"design", o.design}, {"reps", o.reps}, {"engine", o.engine}, {"seed", config.rng_seed},
                         {"cutoff", o.cutoff}, {"bandwidth", o.bandwidth}, {"kink", o.kink}, {"lower", o.lower},
                         {"price_unit", o.price_unit}, {"treated_set", o.treated_set},
                         {"control_set", o.control_set}, {"se", o.se}};
  bundle.set("config_text", text);
  bundle.write("config.yaml", text);
  bundle.write("replications.csv", table_text(table));
  bundle.write("summary.json", summary.dump(2) + "\n");
  bundle.finish();
  say(g, out, o.design + ": " + std::to_string(ok) + "/" + std::to_string(o.reps) + " replications, coverage " +
                  fmt(summary["coverage"].get<double>()) + ", rejection rate " +
                  fmt(summary["rejection_rate"].get<double>()));
}

void cmd_report(const std::string& dir, GlobalOptions& g, std::ostream& out) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw ingest::IngestError(ingest::IngestErrc::IoError, "not a directory: " + dir, {{"path", dir}});
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().filename() != "index.html") files.push_back(e.path().filename());
  }
  std::sort(files.begin(), files.end());
  json manifest;
  if (fs::exists(fs::path(dir) / "manifest.json")) {
    try {
      manifest = json::parse(read_text(fs::path(dir) / "manifest.json", kIngestError));
    } catch (const json::exception&) {
    }
  }
  auto esc = [](const std::string& s) {
    std::string r;
    for (char c : s) {
      if (c == '<') r += "&lt;";
      else if (c == '>') r += "&gt;";
      else if (c == '&') r += "&amp;";
      else r += c;
    }
    return r;
  };
  std::ostringstream h;
  h << "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\"><title>gelab bundle</title>\n"
    << "<style>body{font-family:sans-serif;margin:2em}td,th{padding:2px 10px;text-align:left}"
    << "code{font-size:90%}</style></head><body>\n";
  h << "<h1>" << esc(manifest.value("command", std::string("bundle"))) << "</h1>\n";
  if (manifest.contains("parameters")) h << "<pre>" << esc(manifest["parameters"].dump(2)) << "</pre>\n";
  h << "<table><tr><th>artifact</th><th>bytes</th><th>sha256</th></tr>\n";
  for (const auto& f : files) {
    const auto full = fs::path(dir) / f;
    h << "<tr><td><a href=\"" << esc(f.string()) << "\">" << esc(f.string()) << "</a></td><td>"
      << fs::file_size(full) << "</td><td><code>" << sha256_file(full) << "</code></td></tr>\n";
  }
  h << "</table>\n";
  for (const auto& f : files) {
    if (f.extension() == ".svg") h << "<h2>" << esc(f.string()) << "</h2>\n<img src=\"" << esc(f.string()) << "\">\n";
  }
  h << "</body></html>\n";
  std::ofstream o(fs::path(dir) / "index.html");
  if (!o) throw ingest::IngestError(ingest::IngestErrc::IoError, "cannot write index.html", {{"path", dir}});
  o << h.str();
  say(g, out, "wrote " + (fs::path(dir) / "index.html").string());
}

}  // namespace gelab::cli
