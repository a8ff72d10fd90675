#include <benchmark/benchmark.h>

#include <random>

#include "gelab/econometrics/did.hpp"
#include "gelab/econometrics/local_poly.hpp"
#include "gelab/econometrics/rd.hpp"
#include "gelab/simkit/config.hpp"
#include "gelab/simkit/synth.hpp"

using namespace gelab;
using namespace gelab::econometrics;

static void BM_LocalPolyFit(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> z;
  std::vector<WeightedPoint> pts;
  for (int i = 0; i < state.range(0); ++i) {
    const double x = -1.0 + 2.0 * (i + 0.5) / static_cast<double>(state.range(0));
    pts.push_back({x, 1.0 + 0.5 * x + z(rng), 1.0});
  }
  const LocalPolyOptions opt{0.0, 1.0, 2, Kernel::triangular, FitSide::both};
  for (auto _ : state) benchmark::DoNotOptimize(local_poly_fit(pts, opt).coefficients(0));
}
BENCHMARK(BM_LocalPolyFit)->Arg(100)->Arg(10'000);

static simkit::ScenarioConfig synth_config(int items, int days) {
  simkit::ScenarioConfig c;
  c.n_items = items;
  c.n_days = days;
  c.price.log_min = 4.25;
  c.price.log_max = 4.87;
  return c;
}

static void BM_RdEstimate(benchmark::State& state) {
  const Panel p = simkit::synth_panel(synth_config(static_cast<int>(state.range(0)), 60));
  for (auto _ : state) benchmark::DoNotOptimize(rd_estimate(p, RdSpec{}).beta);
}
BENCHMARK(BM_RdEstimate)->Arg(50)->Arg(500)->Unit(benchmark::kMicrosecond);

static void BM_DidEstimate(benchmark::State& state) {
  simkit::ScenarioConfig c = synth_config(static_cast<int>(state.range(0)), 60);
  c.price.log_min = 12.0;
  c.price.log_max = 15.0;
  simkit::SinkRound round;
  round.start = add_days(c.start_date, 30);
  round.count = 10;
  round.daily_max = 5;
  c.sink_rounds.push_back(round);
  const Panel p = simkit::synth_panel(c);
  DidSpec s;
  s.treated = p.metadata().item_sets.at("sink_round_1");
  s.control = p.metadata().item_sets.at("non_sink_high_level");
  s.implementation = add_days(c.start_date, 30);
  for (auto _ : state) benchmark::DoNotOptimize(did_estimate(p, s).theta);
}
BENCHMARK(BM_DidEstimate)->Arg(60)->Arg(400)->Unit(benchmark::kMicrosecond);
