#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <type_traits>
#include <vector>

#include "gelab/error.hpp"
#include "gelab/panel.hpp"
#include "gelab/simkit/config.hpp"
#include "gelab/simkit/rng.hpp"
#include "gelab/simkit/scenario.hpp"
#include "gelab/simkit/synth.hpp"

namespace gelab::simkit {

enum class PanelSource { synthetic, agent };

struct ReplicateOptions {
  unsigned threads = 1;
  PanelSource source = PanelSource::synthetic;
};

template <class R>
struct Replication {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::optional<R> value;
  std::string error_code;
  std::string error_message;

  bool ok() const { return value.has_value(); }
};

inline Panel make_panel(const ScenarioConfig& config, PanelSource source) {
  return source == PanelSource::synthetic ? synth_panel(config) : run_scenario(config).panel;
}

/// Runs `analysis(panel)` on `n_reps` independently seeded panels. Replication k uses
/// replication_seed(config.rng_seed, k); results are stored by index so the output does not
/// depend on thread count or scheduling. A throwing replication records its error and the
/// batch continues.
template <class Analysis>
auto replicate(const ScenarioConfig& config, std::size_t n_reps, Analysis&& analysis,
               ReplicateOptions options = {})
    -> std::vector<Replication<std::decay_t<std::invoke_result_t<Analysis&, const Panel&>>>> {
  using R = std::decay_t<std::invoke_result_t<Analysis&, const Panel&>>;
  if (n_reps == 0) throw ConfigError({{"n_reps", 0, "must be at least 1"}});
  std::vector<Replication<R>> out(n_reps);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next.fetch_add(1); k < n_reps; k = next.fetch_add(1)) {
      auto& rep = out[k];
      rep.index = k;
      rep.seed = replication_seed(config.rng_seed, k);
      ScenarioConfig cfg = config;
      cfg.rng_seed = rep.seed;
      try {
        const Panel panel = make_panel(cfg, options.source);
        rep.value.emplace(analysis(panel));
      } catch (const Error& e) {
        rep.error_code = e.code();
        rep.error_message = e.what();
      } catch (const std::exception& e) {
        rep.error_code = "Exception";
        rep.error_message = e.what();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, static_cast<unsigned>(n_reps)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return out;
}

}  // namespace gelab::simkit
