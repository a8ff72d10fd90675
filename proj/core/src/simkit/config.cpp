#include "gelab/simkit/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace gelab::simkit {

namespace {

std::string summarize(const std::vector<FieldDiagnostic>& diags, const std::string& source) {
  std::ostringstream os;
  os << "invalid scenario config";
  if (!source.empty()) os << " (" << source << ")";
  for (const auto& d : diags) {
    os << "\n  " << d.field;
    if (d.line > 0) os << " (line " << d.line << ")";
    os << ": " << d.message;
  }
  return os.str();
}

Error::Details to_details(const std::vector<FieldDiagnostic>& diags, const std::string& source) {
  Error::Details out;
  if (!source.empty()) out.emplace_back("source", source);
  for (const auto& d : diags) {
    out.emplace_back(d.field, (d.line > 0 ? "line " + std::to_string(d.line) + ": " : std::string{}) + d.message);
  }
  return out;
}

using LineMap = std::map<std::string, int>;

void validate_impl(const ScenarioConfig& c, std::vector<FieldDiagnostic>& out, const LineMap* lines) {
  auto add = [&](const std::string& field, const std::string& msg) {
    int line = 0;
    if (lines) {
      // Report the closest enclosing field that has a recorded line.
      std::string key = field;
      while (true) {
        auto it = lines->find(key);
        if (it != lines->end()) {
          line = it->second;
          break;
        }
        const auto cut = key.find_last_of(".[");
        if (cut == std::string::npos) break;
        key = key.substr(0, cut);
      }
    }
    out.push_back({field, line, msg});
  };
  const Date end = add_days(c.start_date, c.n_days - 1);
  auto in_horizon = [&](Date d) { return d >= c.start_date && d <= end; };

  if (c.n_items < 1) add("items", "must be at least 1");
  if (c.n_agents < 1) add("agents", "must be at least 1");
  if (c.n_days < 1) add("days", "must be at least 1");
  if (!(c.high_level_price > 0)) add("high_level_price", "must be positive");

  if (!std::isfinite(c.price.log_min) || !std::isfinite(c.price.log_max) || c.price.log_min > c.price.log_max) {
    add("price.log_min", "must be finite and not exceed price.log_max");
  }
  if (!(c.price.ar >= 0.0 && c.price.ar < 1.0)) add("price.ar", "must be in [0, 1)");
  if (!(c.price.volatility >= 0.0)) add("price.volatility", "must be non-negative");
  if (!std::isfinite(c.price.drift)) add("price.drift", "must be finite");

  if (!std::isfinite(c.volume.intercept)) add("volume.intercept", "must be finite");
  if (!(c.volume.price_scale > 0.0)) add("volume.price_scale", "must be positive");
  if (!(c.volume.item_sd >= 0.0)) add("volume.item_sd", "must be non-negative");
  if (!(c.volume.day_sd >= 0.0)) add("volume.day_sd", "must be non-negative");
  if (!(c.volume.noise_sd >= 0.0)) add("volume.noise_sd", "must be non-negative");

  if (!(c.agents.spread >= 0.0)) add("agent.spread", "must be non-negative");
  if (c.agents.max_quantity < 1) add("agent.max_quantity", "must be at least 1");
  if (c.agents.item_buy_limit < 1) add("agent.buy_limit", "must be at least 1");
  if (c.agents.initial_gp < 0) add("agent.initial_gp", "must be non-negative");
  if (c.agents.max_open_orders < 1) add("agent.max_open_orders", "must be at least 1");
  if (c.agents.max_arrivals < 1) add("agent.max_arrivals", "must be at least 1");

  if (c.tax.enabled) {
    if (c.tax.start && !in_horizon(*c.tax.start)) add("tax.start", "must fall inside the simulated horizon");
    try {
      c.tax.schedule.validate();
    } catch (const Error& e) {
      add("tax", e.what());
    }
  }

  std::set<ItemId> used;
  for (std::size_t r = 0; r < c.sink_rounds.size(); ++r) {
    const auto& round = c.sink_rounds[r];
    const std::string f = "sink[" + std::to_string(r) + "]";
    if (!in_horizon(round.start)) add(f + ".start", "must fall inside the simulated horizon");
    if (round.daily_max < 1) add(f + ".daily_max", "must be at least 1");
    if (round.items.empty() && round.count < 1) add(f + ".items", "needs explicit items or a positive count");
    if (!round.items.empty() && round.count > 0) add(f + ".count", "give either items or count, not both");
    for (ItemId id : round.items) {
      if (id.value < 1 || id.value > c.n_items) add(f + ".items", "item id " + std::to_string(id.value) + " out of range");
      if (!used.insert(id).second) add(f + ".items", "item id " + std::to_string(id.value) + " already sinked");
    }
  }

  for (std::size_t k = 0; k < c.injected_effects.size(); ++k) {
    const auto& e = c.injected_effects[k];
    const std::string f = "effects[" + std::to_string(k) + "]";
    if (!std::isfinite(e.magnitude)) add(f + ".magnitude", "must be finite");
    if (e.effect_date && !in_horizon(*e.effect_date)) add(f + ".date", "must fall inside the simulated horizon");
    switch (e.kind) {
      case EffectKind::rd_step:
      case EffectKind::rk_slope:
        if (!(e.cutoff > 0.0)) add(f + ".cutoff", "must be a positive price");
        if (!(e.price_unit > 0.0)) add(f + ".price_unit", "must be positive");
        if (!e.items.empty() || !e.item_set.empty()) add(f + ".items", "discontinuity effects apply to all items");
        break;
      case EffectKind::did_level:
        if (e.items.empty() && e.item_set.empty()) add(f + ".items", "did_level needs items or item_set");
        for (ItemId id : e.items) {
          if (id.value < 1 || id.value > c.n_items) add(f + ".items", "item id " + std::to_string(id.value) + " out of range");
        }
        if (!e.effect_date) add(f + ".date", "did_level needs an effect date");
        break;
    }
  }
  if (c.pretrend.slope_per_week != 0.0 && c.pretrend.item_set.empty()) {
    add("pretrend.item_set", "a trend violation needs an item set");
  }
}

struct Parser {
  std::vector<FieldDiagnostic> diags;
  LineMap lines;

  static int line_of(const YAML::Node& n) { return n.Mark().line >= 0 ? n.Mark().line + 1 : 0; }

  void fail(const std::string& field, const YAML::Node& n, const std::string& msg) {
    diags.push_back({field, line_of(n), msg});
  }

  template <class T>
  void read(const YAML::Node& parent, const char* key, const std::string& path, T& out) {
    const YAML::Node n = parent[key];
    if (!n) return;
    lines[path] = line_of(n);
    try {
      out = n.as<T>();
    } catch (const YAML::Exception&) {
      fail(path, n, "cannot convert '" + (n.IsScalar() ? n.Scalar() : std::string("<node>")) + "'");
    }
  }

  void read_date(const YAML::Node& parent, const char* key, const std::string& path, Date& out) {
    const YAML::Node n = parent[key];
    if (!n) return;
    lines[path] = line_of(n);
    if (auto d = n.IsScalar() ? try_parse_date(n.Scalar()) : std::nullopt) {
      out = *d;
    } else {
      fail(path, n, "expected a YYYY-MM-DD date");
    }
  }

  void read_opt_date(const YAML::Node& parent, const char* key, const std::string& path, std::optional<Date>& out) {
    if (!parent[key]) return;
    Date d{};
    const auto before = diags.size();
    read_date(parent, key, path, d);
    if (diags.size() == before) out = d;
  }

  void read_items(const YAML::Node& parent, const char* key, const std::string& path, std::vector<ItemId>& out) {
    const YAML::Node n = parent[key];
    if (!n) return;
    lines[path] = line_of(n);
    if (!n.IsSequence()) {
      fail(path, n, "expected a list of item ids");
      return;
    }
    for (const auto& v : n) {
      try {
        out.emplace_back(v.as<std::int64_t>());
      } catch (const YAML::Exception&) {
        fail(path, v, "item ids must be integers");
      }
    }
  }

  void check_keys(const YAML::Node& n, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!n.IsMap()) {
      fail(path.empty() ? "<root>" : path, n, "expected a mapping");
      return;
    }
    for (const auto& kv : n) {
      const auto key = kv.first.as<std::string>();
      bool ok = false;
      for (const char* a : allowed) ok |= key == a;
      if (!ok) fail(path.empty() ? key : path + "." + key, kv.first, "unknown key");
    }
  }

  void read_rate(const YAML::Node& parent, const std::string& path, exchange::TaxSchedule& s) {
    const YAML::Node n = parent["rate"];
    if (!n) return;
    lines[path] = line_of(n);
    const std::string text = n.IsScalar() ? n.Scalar() : std::string{};
    const auto slash = text.find('/');
    try {
      if (slash != std::string::npos) {
        s.rate_num = std::stoll(text.substr(0, slash));
        s.rate_den = std::stoll(text.substr(slash + 1));
        return;
      }
      // Decimal rate: exact conversion through its digits (at most 9 after the point).
      const auto dot = text.find('.');
      const std::string digits = dot == std::string::npos ? text : text.substr(0, dot) + text.substr(dot + 1);
      const std::size_t frac = dot == std::string::npos ? 0 : text.size() - dot - 1;
      if (frac > 9 || digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
        throw std::invalid_argument("rate");
      }
      std::int64_t num = std::stoll(digits);
      std::int64_t den = 1;
      for (std::size_t i = 0; i < frac; ++i) den *= 10;
      const auto g = std::gcd(num, den);
      s.rate_num = g ? num / g : num;
      s.rate_den = g ? den / g : den;
    } catch (const std::exception&) {
      fail(path, n, "rate must be a decimal like 0.01 or a fraction like 1/100");
    }
  }

  ScenarioConfig parse(const YAML::Node& root) {
    ScenarioConfig c;
    check_keys(root, "", {"seed", "items", "agents", "days", "start_date", "high_level_price", "price", "volume",
                          "agent", "tax", "sink", "effects", "pretrend"});
    if (!root.IsMap()) return c;
    read(root, "seed", "seed", c.rng_seed);
    read(root, "items", "items", c.n_items);
    read(root, "agents", "agents", c.n_agents);
    read(root, "days", "days", c.n_days);
    read_date(root, "start_date", "start_date", c.start_date);
    read(root, "high_level_price", "high_level_price", c.high_level_price);

    if (const auto p = root["price"]) {
      check_keys(p, "price", {"log_min", "log_max", "drift", "ar", "volatility"});
      read(p, "log_min", "price.log_min", c.price.log_min);
      read(p, "log_max", "price.log_max", c.price.log_max);
      read(p, "drift", "price.drift", c.price.drift);
      read(p, "ar", "price.ar", c.price.ar);
      read(p, "volatility", "price.volatility", c.price.volatility);
    }
    if (const auto v = root["volume"]) {
      check_keys(v, "volume", {"intercept", "log_price_slope", "price_slope", "price_scale", "item_sd", "day_sd",
                               "noise_sd"});
      read(v, "intercept", "volume.intercept", c.volume.intercept);
      read(v, "log_price_slope", "volume.log_price_slope", c.volume.log_price_slope);
      read(v, "price_slope", "volume.price_slope", c.volume.price_slope);
      read(v, "price_scale", "volume.price_scale", c.volume.price_scale);
      read(v, "item_sd", "volume.item_sd", c.volume.item_sd);
      read(v, "day_sd", "volume.day_sd", c.volume.day_sd);
      read(v, "noise_sd", "volume.noise_sd", c.volume.noise_sd);
    }
    if (const auto a = root["agent"]) {
      check_keys(a, "agent", {"spread", "max_quantity", "buy_limit", "initial_gp", "max_open_orders", "max_arrivals"});
      read(a, "spread", "agent.spread", c.agents.spread);
      read(a, "max_quantity", "agent.max_quantity", c.agents.max_quantity);
      read(a, "buy_limit", "agent.buy_limit", c.agents.item_buy_limit);
      read(a, "initial_gp", "agent.initial_gp", c.agents.initial_gp);
      read(a, "max_open_orders", "agent.max_open_orders", c.agents.max_open_orders);
      read(a, "max_arrivals", "agent.max_arrivals", c.agents.max_arrivals);
    }
    if (const auto t = root["tax"]) {
      check_keys(t, "tax", {"enabled", "start", "exempt_below", "rate", "cap"});
      read(t, "enabled", "tax.enabled", c.tax.enabled);
      read_opt_date(t, "start", "tax.start", c.tax.start);
      read(t, "exempt_below", "tax.exempt_below", c.tax.schedule.exempt_below);
      read(t, "cap", "tax.cap", c.tax.schedule.cap);
      read_rate(t, "tax.rate", c.tax.schedule);
      lines["tax"] = line_of(t);
    }
    if (const auto s = root["sink"]) {
      lines["sink"] = line_of(s);
      if (!s.IsSequence()) {
        fail("sink", s, "expected a list of sink rounds");
      } else {
        for (std::size_t i = 0; i < s.size(); ++i) {
          const std::string f = "sink[" + std::to_string(i) + "]";
          const auto r = s[i];
          lines[f] = line_of(r);
          check_keys(r, f, {"start", "items", "count", "daily_max"});
          if (!r.IsMap()) continue;
          SinkRound round;
          round.start = c.start_date;
          if (!r["start"]) fail(f + ".start", r, "required");
          read_date(r, "start", f + ".start", round.start);
          read_items(r, "items", f + ".items", round.items);
          read(r, "count", f + ".count", round.count);
          read(r, "daily_max", f + ".daily_max", round.daily_max);
          c.sink_rounds.push_back(std::move(round));
        }
      }
    }
    if (const auto e = root["effects"]) {
      lines["effects"] = line_of(e);
      if (!e.IsSequence()) {
        fail("effects", e, "expected a list of effects");
      } else {
        for (std::size_t i = 0; i < e.size(); ++i) {
          const std::string f = "effects[" + std::to_string(i) + "]";
          const auto n = e[i];
          lines[f] = line_of(n);
          check_keys(n, f, {"kind", "magnitude", "cutoff", "price_unit", "items", "item_set", "date", "outcome"});
          if (!n.IsMap()) continue;
          InjectedEffect eff;
          std::string kind;
          read(n, "kind", f + ".kind", kind);
          if (kind == "rd_step") {
            eff.kind = EffectKind::rd_step;
          } else if (kind == "rk_slope") {
            eff.kind = EffectKind::rk_slope;
            eff.price_unit = 1e6;
          } else if (kind == "did_level") {
            eff.kind = EffectKind::did_level;
            eff.outcome = OutcomeVar::price;
          } else {
            fail(f + ".kind", n, "expected rd_step, rk_slope or did_level");
          }
          read(n, "magnitude", f + ".magnitude", eff.magnitude);
          read(n, "cutoff", f + ".cutoff", eff.cutoff);
          read(n, "price_unit", f + ".price_unit", eff.price_unit);
          read_items(n, "items", f + ".items", eff.items);
          read(n, "item_set", f + ".item_set", eff.item_set);
          read_opt_date(n, "date", f + ".date", eff.effect_date);
          std::string outcome;
          read(n, "outcome", f + ".outcome", outcome);
          if (outcome == "price") {
            eff.outcome = OutcomeVar::price;
          } else if (outcome == "volume") {
            eff.outcome = OutcomeVar::volume;
          } else if (!outcome.empty()) {
            fail(f + ".outcome", n, "expected price or volume");
          }
          if (eff.kind != EffectKind::did_level && eff.outcome != OutcomeVar::volume) {
            fail(f + ".outcome", n, "discontinuity effects act on volume");
          }
          c.injected_effects.push_back(std::move(eff));
        }
      }
    }
    if (const auto p = root["pretrend"]) {
      check_keys(p, "pretrend", {"item_set", "slope_per_week", "until"});
      read(p, "item_set", "pretrend.item_set", c.pretrend.item_set);
      read(p, "slope_per_week", "pretrend.slope_per_week", c.pretrend.slope_per_week);
      read_opt_date(p, "until", "pretrend.until", c.pretrend.until);
    }
    return c;
  }
};

}  // namespace

ConfigError::ConfigError(std::vector<FieldDiagnostic> diagnostics, std::string source)
    : Error("ConfigInvalid", summarize(diagnostics, source), to_details(diagnostics, source)),
      diagnostics_(std::move(diagnostics)) {}

void validate(const ScenarioConfig& config) {
  std::vector<FieldDiagnostic> diags;
  validate_impl(config, diags, nullptr);
  if (!diags.empty()) throw ConfigError(std::move(diags));
}

ScenarioConfig parse_scenario_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError({{"<syntax>", e.mark.line + 1, e.msg}}, source);
  }
  Parser p;
  ScenarioConfig c = p.parse(root);
  if (p.diags.empty()) validate_impl(c, p.diags, &p.lines);
  if (!p.diags.empty()) throw ConfigError(std::move(p.diags), source);
  return c;
}

ScenarioConfig load_scenario_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError({{"<file>", 0, "cannot open config file '" + path + "'"}}, path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario_config(ss.str(), path);
}

}  // namespace gelab::simkit
