#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gelab/date.hpp"
#include "gelab/error.hpp"
#include "gelab/exchange/tax.hpp"
#include "gelab/panel.hpp"

namespace gelab::simkit {

/// Log price of item i on day d: mean_i + drift * d + u_{i,d}, with u an AR(1) process.
/// Item means are drawn uniformly on [log_min, log_max].
struct PriceDgp {
  double log_min = 11.0;
  double log_max = 16.0;
  double drift = 0.0;
  double ar = 0.9;
  double volatility = 0.01;
};

/// Log volume: intercept + item effect + day effect + log_price_slope * log P
///             + price_slope * P / price_scale + injected effects + noise.
struct VolumeDgp {
  double intercept = 3.0;
  double log_price_slope = 0.0;
  double price_slope = 0.0;
  double price_scale = 1.0;
  double item_sd = 0.0;
  double day_sd = 0.0;
  double noise_sd = 0.0;
};

/// Conventions for the agent-based run (not calibrated to any real population).
struct AgentRules {
  /// Log-price dispersion of limit prices around the day's fundamental.
  double spread = 0.02;
  std::int64_t max_quantity = 3;
  std::int64_t item_buy_limit = 10'000;
  std::int64_t initial_gp = 1'000'000'000;
  int max_open_orders = 8;
  /// Cap on order arrivals per item-day.
  std::int64_t max_arrivals = 5'000;
};

struct SinkRound {
  Date start;
  /// Explicit targets; when empty, `count` high-level items not used by earlier rounds are
  /// drawn with the scenario seed.
  std::vector<ItemId> items;
  int count = 0;
  std::int64_t daily_max = 1;
};

struct TaxSettings {
  bool enabled = false;
  std::optional<Date> start;
  exchange::TaxSchedule schedule;
};

/// Divergent pre-intervention trend for a named item set (violates common trends when
/// `slope_per_week` is non-zero).
struct PretrendViolation {
  std::string item_set;
  double slope_per_week = 0.0;
  std::optional<Date> until;
};

struct ScenarioConfig {
  std::uint64_t rng_seed = 1;
  int n_items = 50;
  int n_agents = 100;
  int n_days = 60;
  Date start_date = make_date(2021, 11, 1);
  double high_level_price = 100'000.0;
  PriceDgp price;
  VolumeDgp volume;
  AgentRules agents;
  TaxSettings tax;
  std::vector<SinkRound> sink_rounds;
  std::vector<InjectedEffect> injected_effects;
  PretrendViolation pretrend;
};

struct FieldDiagnostic {
  std::string field;
  /// 1-based line in the source file, 0 when unknown.
  int line = 0;
  std::string message;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<FieldDiagnostic> diagnostics, std::string source = {});
  const std::vector<FieldDiagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<FieldDiagnostic> diagnostics_;
};

/// Throws ConfigError listing every violated constraint.
void validate(const ScenarioConfig& config);

/// Parses the YAML scenario format documented in configs/README.md.
ScenarioConfig parse_scenario_config(const std::string& text, const std::string& source = "<string>");
ScenarioConfig load_scenario_config(const std::string& path);

}  // namespace gelab::simkit
