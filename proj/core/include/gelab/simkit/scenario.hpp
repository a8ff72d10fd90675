#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gelab/exchange/market.hpp"
#include "gelab/panel.hpp"
#include "gelab/simkit/config.hpp"

namespace gelab::simkit {

struct ScenarioResult {
  Panel panel;
  std::vector<exchange::Trade> trades;
  std::vector<exchange::Removal> removals;
  Gp final_coffer = 0;
  exchange::ExternalFlows flows;
  /// Rejected submissions by error code.
  std::map<std::string, std::int64_t> rejections;
  std::int64_t orders_submitted = 0;
};

/// Agent-based run through the exchange, one simulated day at a time.
///
/// Each item-day draws a Poisson number of order arrivals with intensity exp(log volume DGP);
/// each arrival is a random agent buying or selling at exp(fundamental + spread * N(0,1)).
/// Sellers without stock produce it; buyers short of GP receive income. Resting orders expire
/// at the end of each day after the sink (if active) has run. The panel is the per-day
/// daily_summary of the trade log.
ScenarioResult run_scenario(const ScenarioConfig& config);

}  // namespace gelab::simkit
