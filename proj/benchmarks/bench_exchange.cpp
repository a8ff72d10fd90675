#include <benchmark/benchmark.h>

#include <random>

#include "gelab/exchange/market.hpp"
#include "gelab/exchange/tax.hpp"
#include "gelab/simkit/config.hpp"
#include "gelab/simkit/scenario.hpp"

using namespace gelab;
using namespace gelab::exchange;

static void BM_ApplyTax(benchmark::State& state) {
  const TaxSchedule t;
  Gp p = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(apply_tax(p, t));
    p = (p * 48271) % 2'000'000'000 + 1;
  }
}
BENCHMARK(BM_ApplyTax);

static void BM_SubmitOrders(benchmark::State& state) {
  const int players = 64;
  for (auto _ : state) {
    state.PauseTiming();
    std::vector<ItemSpec> items;
    for (int i = 1; i <= 10; ++i) items.push_back({ItemId{i}, "item", 1'000'000, false});
    MarketRules rules;
    rules.tax = TaxSchedule{};
    Market m(items, rules);
    for (int j = 1; j <= players; ++j) {
      m.open_account(PlayerId{j}, 1'000'000'000);
      for (int i = 1; i <= 10; ++i) m.deposit_items(PlayerId{j}, ItemId{i}, 100'000);
    }
    std::mt19937_64 rng(1);
    state.ResumeTiming();
    for (int k = 0; k < state.range(0); ++k) {
      OrderRequest r{PlayerId{1 + static_cast<std::int64_t>(rng() % players)}, rng() % 2 ? Side::buy : Side::sell,
                     ItemId{1 + static_cast<std::int64_t>(rng() % 10)}, 900 + static_cast<Gp>(rng() % 200),
                     1 + static_cast<std::int64_t>(rng() % 5)};
      try {
        m.submit_order(r);
      } catch (const ExchangeError&) {
      }
      if (k % 1000 == 999) m.cancel_all();
    }
    benchmark::DoNotOptimize(m.trade_log().size());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SubmitOrders)->Arg(10'000)->Arg(100'000)->Unit(benchmark::kMillisecond);

static void BM_RunScenario(benchmark::State& state) {
  simkit::ScenarioConfig c;
  c.n_items = 30;
  c.n_agents = static_cast<int>(state.range(0));
  c.n_days = 30;
  for (auto _ : state) benchmark::DoNotOptimize(simkit::run_scenario(c).trades.size());
}
BENCHMARK(BM_RunScenario)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
