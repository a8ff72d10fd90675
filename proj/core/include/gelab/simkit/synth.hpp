#pragma once

#include <map>
#include <string>
#include <vector>

#include "gelab/panel.hpp"
#include "gelab/simkit/config.hpp"

namespace gelab::simkit {

/// Named item groups of a scenario: "all", "high_level", "sink_round_<k>", "sink_all",
/// "non_sink_high_level", and "treated" (union of did_level targets).
std::map<std::string, std::vector<ItemId>> resolve_item_sets(const ScenarioConfig& config);

/// Per-item mean log price, indexed by item id - 1.
std::vector<double> item_log_means(const ScenarioConfig& config);

/// Samples the parametric DGP directly, without the exchange. Effects are applied exactly as
/// configured; with zero noise each estimator recovers its effect to rounding.
Panel synth_panel(const ScenarioConfig& config);

}  // namespace gelab::simkit
