#include "gelab/simkit/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "dgp.hpp"
#include "gelab/exchange/summary.hpp"
#include "gelab/simkit/rng.hpp"
#include "gelab/simkit/synth.hpp"

namespace gelab::simkit {

namespace {

struct Arrival {
  std::int64_t minute;
  std::size_t item;
  std::int64_t k;
};

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& config) {
  validate(config);
  const auto sets = resolve_item_sets(config);
  const auto means = item_log_means(config);
  detail::DgpState dgp(config, sets);

  std::vector<exchange::ItemSpec> specs;
  for (int i = 1; i <= config.n_items; ++i) {
    const bool high = std::exp(means[static_cast<std::size_t>(i - 1)]) > config.high_level_price;
    specs.push_back({ItemId{i}, "item_" + std::to_string(i), config.agents.item_buy_limit, high});
  }
  exchange::MarketRules rules;
  rules.max_open_orders = config.agents.max_open_orders;
  exchange::Market market(specs, rules);
  for (int a = 1; a <= config.n_agents; ++a) market.open_account(PlayerId{a}, config.agents.initial_gp);

  std::vector<exchange::SinkPolicy> sinks;
  for (std::size_t r = 0; r < config.sink_rounds.size(); ++r) {
    const auto& ids = sets.at("sink_round_" + std::to_string(r + 1));
    sinks.push_back({{ids.begin(), ids.end()}, config.sink_rounds[r].daily_max, config.sink_rounds[r].start});
  }

  auto rng = make_stream(config.rng_seed, detail::kAgents);
  std::normal_distribution<double> z;
  std::uniform_int_distribution<std::int64_t> minute_dist(0, exchange::kMinutesPerDay - 1);
  std::uniform_int_distribution<int> agent_dist(1, config.n_agents);
  std::uniform_int_distribution<std::int64_t> qty_dist(1, config.agents.max_quantity);
  std::bernoulli_distribution coin(0.5);

  ScenarioResult result;
  std::vector<PanelObservation> obs;
  bool tax_on = false;
  std::vector<Arrival> arrivals;

  for (int d = 0; d < config.n_days; ++d) {
    const Date date = add_days(config.start_date, d);
    const auto day_start = exchange::SimTime::start_of(date);
    market.advance_to(day_start);
    const bool want_tax = config.tax.enabled && (!config.tax.start || date >= *config.tax.start);
    if (want_tax != tax_on) {
      market.set_tax(want_tax ? std::optional(config.tax.schedule) : std::nullopt);
      tax_on = want_tax;
    }

    dgp.step(d);
    arrivals.clear();
    for (std::size_t i = 0; i < dgp.log_volume().size(); ++i) {
      const double lambda = std::exp(dgp.log_volume()[i]);
      std::int64_t n = 0;
      if (lambda > 0.0 && std::isfinite(lambda)) {
        n = std::poisson_distribution<std::int64_t>(lambda)(rng);
      } else if (!std::isfinite(lambda)) {
        n = config.agents.max_arrivals;
      }
      n = std::min(n, config.agents.max_arrivals);
      for (std::int64_t k = 0; k < n; ++k) arrivals.push_back({minute_dist(rng), i, k});
    }
    std::sort(arrivals.begin(), arrivals.end(), [](const Arrival& a, const Arrival& b) {
      return std::tie(a.minute, a.item, a.k) < std::tie(b.minute, b.item, b.k);
    });

    const std::size_t first_trade = market.trade_log().size();
    for (const auto& arr : arrivals) {
      const PlayerId agent{agent_dist(rng)};
      const auto side = coin(rng) ? exchange::Side::buy : exchange::Side::sell;
      const std::int64_t qty = qty_dist(rng);
      const double draw = std::exp(dgp.log_price()[arr.item] + config.agents.spread * z(rng));
      const Gp limit = std::max<Gp>(1, std::llround(draw));
      const ItemId item{static_cast<std::int64_t>(arr.item + 1)};

      market.advance_to({day_start.minutes + arr.minute});
      if (side == exchange::Side::buy) {
        const Gp need = limit * qty;
        const Gp have = market.account(agent).gp;
        if (have < need) market.deposit_gp(agent, need - have);
      } else {
        const auto& inv = market.account(agent).inventory;
        const auto it = inv.find(item);
        const std::int64_t have = it == inv.end() ? 0 : it->second;
        if (have < qty) market.deposit_items(agent, item, qty - have);
      }
      ++result.orders_submitted;
      try {
        market.submit_order({agent, side, item, limit, qty});
      } catch (const exchange::ExchangeError& e) {
        ++result.rejections[e.code()];
      }
    }

    market.advance_to({day_start.minutes + exchange::kMinutesPerDay - 1});
    for (const auto& policy : sinks) {
      if (policy.active_on(date)) market.run_sink_day(policy, date);
    }
    market.cancel_all();

    const auto& log = market.trade_log();
    const auto day = exchange::daily_summary(
        std::span<const exchange::Trade>(log.data() + first_trade, log.size() - first_trade), date);
    obs.insert(obs.end(), day.begin(), day.end());
  }

  PanelMetadata meta;
  meta.provenance = Provenance::simulated;
  meta.ground_truth = dgp.resolved_effects();
  meta.item_sets = sets;
  meta.attributes["generator"] = "agent_scenario";
  meta.attributes["seed"] = std::to_string(config.rng_seed);

  result.panel = Panel(std::move(obs), std::move(meta));
  result.trades = market.trade_log();
  result.removals = market.removal_log();
  result.final_coffer = market.coffer_balance();
  result.flows = market.external_flows();
  return result;
}

}  // namespace gelab::simkit
