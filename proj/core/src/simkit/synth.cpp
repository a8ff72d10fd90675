#include "gelab/simkit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "dgp.hpp"
#include "gelab/simkit/rng.hpp"

namespace gelab::simkit {

std::vector<double> item_log_means(const ScenarioConfig& config) {
  auto rng = make_stream(config.rng_seed, detail::kItemMeans);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> means(static_cast<std::size_t>(std::max(0, config.n_items)));
  for (auto& m : means) m = config.price.log_min + (config.price.log_max - config.price.log_min) * unif(rng);
  return means;
}

std::map<std::string, std::vector<ItemId>> resolve_item_sets(const ScenarioConfig& config) {
  std::map<std::string, std::vector<ItemId>> sets;
  const auto means = item_log_means(config);
  auto& all = sets["all"];
  auto& high = sets["high_level"];
  for (int i = 1; i <= config.n_items; ++i) {
    all.emplace_back(i);
    if (std::exp(means[static_cast<std::size_t>(i - 1)]) > config.high_level_price) high.emplace_back(i);
  }

  auto draw = make_stream(config.rng_seed, detail::kSinkDraw);
  std::set<ItemId> used;
  for (std::size_t r = 0; r < config.sink_rounds.size(); ++r) {
    const auto& round = config.sink_rounds[r];
    std::vector<ItemId> chosen = round.items;
    if (chosen.empty()) {
      std::vector<ItemId> pool;
      for (ItemId id : high) {
        if (!used.count(id)) pool.push_back(id);
      }
      if (static_cast<int>(pool.size()) < round.count) {
        throw ConfigError({{"sink[" + std::to_string(r) + "].count", 0,
                            "only " + std::to_string(pool.size()) + " unsinked high-level items available"}});
      }
      // Partial Fisher-Yates with an explicit index draw keeps the choice stable across
      // standard libraries.
      for (int k = 0; k < round.count; ++k) {
        const auto span = pool.size() - static_cast<std::size_t>(k);
        const auto j = static_cast<std::size_t>(k) + static_cast<std::size_t>(draw() % span);
        std::swap(pool[static_cast<std::size_t>(k)], pool[j]);
      }
      chosen.assign(pool.begin(), pool.begin() + round.count);
    }
    std::sort(chosen.begin(), chosen.end());
    used.insert(chosen.begin(), chosen.end());
    sets["sink_round_" + std::to_string(r + 1)] = chosen;
  }
  sets["sink_all"].assign(used.begin(), used.end());
  auto& rest = sets["non_sink_high_level"];
  for (ItemId id : high) {
    if (!used.count(id)) rest.push_back(id);
  }

  std::set<ItemId> treated;
  for (std::size_t k = 0; k < config.injected_effects.size(); ++k) {
    const auto& e = config.injected_effects[k];
    if (e.kind != EffectKind::did_level) continue;
    treated.insert(e.items.begin(), e.items.end());
    if (!e.item_set.empty()) {
      auto it = sets.find(e.item_set);
      if (it == sets.end()) {
        throw ConfigError({{"effects[" + std::to_string(k) + "].item_set", 0, "unknown item set '" + e.item_set + "'"}});
      }
      treated.insert(it->second.begin(), it->second.end());
    }
  }
  sets["treated"].assign(treated.begin(), treated.end());
  if (!config.pretrend.item_set.empty() && !sets.count(config.pretrend.item_set)) {
    throw ConfigError({{"pretrend.item_set", 0, "unknown item set '" + config.pretrend.item_set + "'"}});
  }
  return sets;
}

namespace detail {

DgpState::DgpState(const ScenarioConfig& config, const std::map<std::string, std::vector<ItemId>>& sets)
    : cfg_(config),
      means_(item_log_means(config)),
      price_rng_(make_stream(config.rng_seed, kPricePath)),
      day_rng_(make_stream(config.rng_seed, kDayEffects)),
      noise_rng_(make_stream(config.rng_seed, kVolumeNoise)) {
  const auto n = static_cast<std::size_t>(config.n_items);
  ar_state_.assign(n, 0.0);
  item_effect_.assign(n, 0.0);
  log_price_.assign(n, 0.0);
  log_volume_.assign(n, 0.0);

  auto eff_rng = make_stream(config.rng_seed, kItemEffects);
  std::normal_distribution<double> z;
  if (config.volume.item_sd > 0.0) {
    for (auto& a : item_effect_) a = config.volume.item_sd * z(eff_rng);
  }
  for (const auto& e : config.injected_effects) {
    InjectedEffect r = e;
    std::set<ItemId> t(e.items.begin(), e.items.end());
    if (!e.item_set.empty()) t.insert(sets.at(e.item_set).begin(), sets.at(e.item_set).end());
    if (e.kind == EffectKind::did_level) r.items.assign(t.begin(), t.end());
    effects_.push_back(std::move(r));
    targets_.push_back(std::move(t));
  }
  if (!config.pretrend.item_set.empty()) {
    const auto& s = sets.at(config.pretrend.item_set);
    trend_items_.insert(s.begin(), s.end());
  }
}

void DgpState::step(int d) {
  const auto& p = cfg_.price;
  const auto& v = cfg_.volume;
  std::normal_distribution<double> z;
  const Date date = add_days(cfg_.start_date, d);
  const double day_effect = v.day_sd > 0.0 ? v.day_sd * z(day_rng_) : 0.0;

  double trend_weeks = d / 7.0;
  if (cfg_.pretrend.until) {
    trend_weeks = std::min(trend_weeks, days_between(cfg_.start_date, *cfg_.pretrend.until) / 7.0);
  }

  for (std::size_t i = 0; i < means_.size(); ++i) {
    const ItemId id{static_cast<std::int64_t>(i + 1)};
    if (p.volatility > 0.0) {
      if (d == 0) {
        ar_state_[i] = p.volatility / std::sqrt(1.0 - p.ar * p.ar) * z(price_rng_);
      } else {
        ar_state_[i] = p.ar * ar_state_[i] + p.volatility * z(price_rng_);
      }
    }
    double lp = means_[i] + p.drift * d + ar_state_[i];
    if (cfg_.pretrend.slope_per_week != 0.0 && trend_items_.count(id)) {
      lp += cfg_.pretrend.slope_per_week * trend_weeks;
    }
    double lv_shift = 0.0;
    for (std::size_t k = 0; k < effects_.size(); ++k) {
      const auto& e = effects_[k];
      if (e.effect_date && date < *e.effect_date) continue;
      if (e.kind == EffectKind::did_level && targets_[k].count(id)) {
        (e.outcome == OutcomeVar::price ? lp : lv_shift) += e.magnitude;
      }
    }
    const double price = std::exp(lp);
    double lv = v.intercept + item_effect_[i] + day_effect + v.log_price_slope * lp +
                v.price_slope * price / v.price_scale + lv_shift;
    for (const auto& e : effects_) {
      if (e.effect_date && date < *e.effect_date) continue;
      if (e.kind == EffectKind::rd_step && price >= e.cutoff) lv += e.magnitude;
      if (e.kind == EffectKind::rk_slope) lv += e.magnitude * kinked_tax(price / e.price_unit, e.cutoff / e.price_unit);
    }
    if (v.noise_sd > 0.0) lv += v.noise_sd * z(noise_rng_);
    log_price_[i] = lp;
    log_volume_[i] = lv;
  }
}

}  // namespace detail

Panel synth_panel(const ScenarioConfig& config) {
  validate(config);
  const auto sets = resolve_item_sets(config);
  detail::DgpState dgp(config, sets);
  std::vector<PanelObservation> obs;
  obs.reserve(static_cast<std::size_t>(config.n_items) * static_cast<std::size_t>(config.n_days));
  for (int d = 0; d < config.n_days; ++d) {
    dgp.step(d);
    const Date date = add_days(config.start_date, d);
    for (int i = 0; i < config.n_items; ++i) {
      const auto k = static_cast<std::size_t>(i);
      obs.push_back({ItemId{i + 1}, date, std::exp(dgp.log_price()[k]), std::exp(dgp.log_volume()[k])});
    }
  }
  PanelMetadata meta;
  meta.provenance = Provenance::simulated;
  meta.ground_truth = dgp.resolved_effects();
  meta.item_sets = sets;
  meta.attributes["generator"] = "synth_panel";
  meta.attributes["seed"] = std::to_string(config.rng_seed);
  return Panel(std::move(obs), std::move(meta));
}

}  // namespace gelab::simkit
