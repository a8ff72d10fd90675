#pragma once

#include <span>
#include <string>
#include <vector>

#include "gelab/date.hpp"
#include "gelab/panel.hpp"

namespace gelab::econometrics {

/// Pearson correlation of the two items' price levels over their common dates in `window`.
/// Needs at least 3 common dates (InsufficientOverlap) and non-constant series (DegenerateSeries).
double price_correlation(const Panel& panel, ItemId i, ItemId k, DateWindow window = {});

struct ControlSetConfig {
  /// Candidate universe; when empty, every item whose mean price in the window exceeds
  /// `price_floor`.
  std::vector<ItemId> universe;
  double price_floor = 100'000.0;
  std::vector<ItemId> sinked;
  double threshold = 0.1;
  DateWindow window;
  /// When set, the correlation window must end before this date.
  std::optional<Date> intervention_date;
};

struct ControlSetResult {
  std::vector<ItemId> control;
  std::vector<ItemId> universe;
  /// Candidates dropped because a correlation with some sinked item could not be computed.
  std::vector<std::pair<ItemId, std::string>> excluded;
};

/// { i in universe \ sinked : |rho(i, k)| < threshold for every sinked k }.
ControlSetResult build_control_set(const Panel& panel, const ControlSetConfig& config);

}  // namespace gelab::econometrics
