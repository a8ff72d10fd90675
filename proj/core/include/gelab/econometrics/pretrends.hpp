#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "gelab/date.hpp"
#include "gelab/econometrics/did.hpp"
#include "gelab/panel.hpp"

namespace gelab::econometrics {

struct PretrendsSpec {
  std::vector<ItemId> treated;
  std::vector<ItemId> control;
  Date implementation;
  /// First day of the pre-window; the window ends the day before `implementation`.
  Date window_start;
  OutcomeVar outcome = OutcomeVar::price;
  SeType se = SeType::cluster_item;
  double level = 0.95;
  /// Weekly means are also emitted (not fitted) up to this date, for plotting.
  std::optional<Date> plot_end;
};

struct WeeklyGroupMean {
  int week = 0;
  Date week_start;
  bool treated = false;
  double mean_log_outcome = 0.0;
  std::size_t n = 0;
};

struct PretrendsResult {
  double slope_treated = 0.0;
  double slope_control = 0.0;
  /// Treated minus control weekly slope of the log outcome.
  double difference = 0.0;
  double se = 0.0;
  double p_value = 1.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::size_t n_obs = 0;
  int n_weeks = 0;
  /// Weeks are 7-day bins anchored at the implementation date (week -1 is the last pre week).
  std::vector<WeeklyGroupMean> weekly;
};

PretrendsResult pretrends_test(const Panel& panel, const PretrendsSpec& spec);

}  // namespace gelab::econometrics
