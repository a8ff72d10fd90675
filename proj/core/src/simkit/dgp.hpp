#pragma once

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gelab/simkit/config.hpp"

namespace gelab::simkit::detail {

enum StreamPurpose : std::uint64_t {
  kItemMeans = 1,
  kSinkDraw = 2,
  kPricePath = 3,
  kItemEffects = 4,
  kDayEffects = 5,
  kVolumeNoise = 6,
  kAgents = 7,
};

/// Day-by-day generator shared by the direct sampler and the agent-based run, so both see the
/// same fundamentals for a given seed.
class DgpState {
 public:
  DgpState(const ScenarioConfig& config, const std::map<std::string, std::vector<ItemId>>& sets);

  /// Advances to day `d` (0-based, called in order) and fills per-item log price and log
  /// volume (with noise) for that day.
  void step(int d);

  const std::vector<double>& log_price() const { return log_price_; }
  const std::vector<double>& log_volume() const { return log_volume_; }
  const std::vector<InjectedEffect>& resolved_effects() const { return effects_; }

 private:
  const ScenarioConfig& cfg_;
  std::vector<double> means_;
  std::vector<double> ar_state_;
  std::vector<double> item_effect_;
  std::vector<InjectedEffect> effects_;
  std::vector<std::set<ItemId>> targets_;
  std::set<ItemId> trend_items_;
  std::mt19937_64 price_rng_;
  std::mt19937_64 day_rng_;
  std::mt19937_64 noise_rng_;
  std::vector<double> log_price_;
  std::vector<double> log_volume_;
};

/// Tax in price units: x/100 below the cap point c, c/100 from it on.
inline double kinked_tax(double x, double c) { return x < c ? x / 100.0 : c / 100.0; }

}  // namespace gelab::simkit::detail
