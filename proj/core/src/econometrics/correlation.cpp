#include "gelab/econometrics/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "gelab/econometrics/errors.hpp"

namespace gelab::econometrics {

double price_correlation(const Panel& panel, ItemId i, ItemId k, DateWindow window) {
  const auto a = panel.series(i);
  const auto b = panel.series(k);
  std::vector<double> xs;
  std::vector<double> ys;
  std::size_t p = 0;
  std::size_t q = 0;
  while (p < a.size() && q < b.size()) {
    if (a[p].date < b[q].date) {
      ++p;
    } else if (b[q].date < a[p].date) {
      ++q;
    } else {
      if (window.contains(a[p].date)) {
        xs.push_back(a[p].price);
        ys.push_back(b[q].price);
      }
      ++p;
      ++q;
    }
  }
  const Error::Details ids{{"item_i", std::to_string(i.value)}, {"item_k", std::to_string(k.value)}};
  if (xs.size() < 3) {
    auto d = ids;
    d.emplace_back("overlap", std::to_string(xs.size()));
    throw EstimationError(EstimationErrc::InsufficientOverlap, "fewer than 3 common dates", d);
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    mx += xs[j];
    my += ys[j];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    const double dx = xs[j] - mx;
    const double dy = ys[j] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) {
    throw EstimationError(EstimationErrc::DegenerateSeries, "price series has zero variance", ids);
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

ControlSetResult build_control_set(const Panel& panel, const ControlSetConfig& config) {
  if (!(config.threshold > 0.0 && config.threshold < 1.0)) {
    throw EstimationError(EstimationErrc::InvalidSpec, "correlation threshold must be in (0, 1)");
  }
  if (config.intervention_date && !(config.window.end && *config.window.end < *config.intervention_date)) {
    throw EstimationError(EstimationErrc::InvalidSpec,
                          "correlation window must end before the intervention date",
                          {{"intervention", format_date(*config.intervention_date)}});
  }
  const std::set<ItemId> sinked(config.sinked.begin(), config.sinked.end());

  ControlSetResult out;
  if (!config.universe.empty()) {
    const std::set<ItemId> uni(config.universe.begin(), config.universe.end());
    for (ItemId k : sinked) {
      if (!uni.count(k)) {
        throw EstimationError(EstimationErrc::InvalidSpec, "sinked item is outside the universe",
                              {{"item_id", std::to_string(k.value)}});
      }
    }
    out.universe.assign(uni.begin(), uni.end());
  } else {
    for (ItemId item : panel.items()) {
      double sum = 0.0;
      std::size_t n = 0;
      for (const auto& o : panel.series(item)) {
        if (!config.window.contains(o.date)) continue;
        sum += o.price;
        ++n;
      }
      if (n > 0 && sum / static_cast<double>(n) > config.price_floor) out.universe.push_back(item);
    }
  }

  std::size_t candidates = 0;
  for (ItemId i : out.universe) {
    if (sinked.count(i)) continue;
    ++candidates;
    bool keep = true;
    for (ItemId k : sinked) {
      try {
        if (!(std::fabs(price_correlation(panel, i, k, config.window)) < config.threshold)) {
          keep = false;
          break;
        }
      } catch (const EstimationError& e) {
        out.excluded.emplace_back(i, e.code() + " with item " + std::to_string(k.value));
        keep = false;
        break;
      }
    }
    if (keep) out.control.push_back(i);
  }
  if (out.control.empty()) {
    throw EstimationError(EstimationErrc::EmptyControlSet,
                          "no candidate is uncorrelated with every sinked item; threshold may be too strict",
                          {{"threshold", std::to_string(config.threshold)},
                           {"candidates", std::to_string(candidates)}});
  }
  return out;
}

}  // namespace gelab::econometrics
