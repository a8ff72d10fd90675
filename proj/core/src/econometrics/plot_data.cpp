#include "gelab/econometrics/plot_data.hpp"

#include <cmath>
#include <map>
#include <set>

namespace gelab::econometrics {

namespace {

DesignPlotData design_plot(const std::vector<XY>& pts, double threshold, double lo, double hi,
                           const LocalPolyFit& left, const LocalPolyFit& right, int bins_per_side) {
  DesignPlotData out;
  out.threshold = threshold;
  const int nb = std::max(1, bins_per_side);
  const double wl = (threshold - lo) / nb;
  const double wr = (hi - threshold) / nb;
  std::vector<std::pair<double, std::size_t>> acc(static_cast<std::size_t>(2 * nb), {0.0, 0});
  for (const auto& p : pts) {
    int b = 0;
    if (p.x < threshold) {
      b = std::clamp(static_cast<int>(std::floor((p.x - lo) / wl)), 0, nb - 1);
    } else {
      b = nb + std::clamp(static_cast<int>(std::floor((p.x - threshold) / wr)), 0, nb - 1);
    }
    acc[static_cast<std::size_t>(b)].first += p.y;
    acc[static_cast<std::size_t>(b)].second += 1;
  }
  for (int b = 0; b < 2 * nb; ++b) {
    const auto& [sum, n] = acc[static_cast<std::size_t>(b)];
    if (n == 0) continue;
    const double x = b < nb ? lo + (b + 0.5) * wl : threshold + (b - nb + 0.5) * wr;
    out.bins.push_back({x, sum / static_cast<double>(n), n});
  }
  constexpr int kSamples = 50;
  for (int s = 0; s <= kSamples; ++s) {
    const double xl = lo + (threshold - lo) * s / kSamples;
    const double xr = threshold + (hi - threshold) * s / kSamples;
    out.fit_left.push_back({xl, left.predict(xl)});
    out.fit_right.push_back({xr, right.predict(xr)});
  }
  return out;
}

}  // namespace

DesignPlotData rd_plot_data(const Panel& panel, const RdEstimate& est, int bins_per_side) {
  const auto& s = est.spec;
  std::vector<XY> pts;
  for (const auto& o : panel.observations()) {
    if (!s.window.contains(o.date) || std::fabs(o.price - s.cutoff) > s.bandwidth || !(o.volume > 0.0)) continue;
    pts.push_back({o.price, std::log(o.volume)});
  }
  return design_plot(pts, s.cutoff, s.cutoff - s.bandwidth, s.cutoff + s.bandwidth, est.left, est.right,
                     bins_per_side);
}

DesignPlotData rk_plot_data(const Panel& panel, const RkEstimate& est, int bins_per_side) {
  const auto& s = est.spec;
  const double upper = s.upper.value_or(2 * s.kink - s.lower);
  std::vector<XY> pts;
  for (const auto& o : panel.observations()) {
    if (!s.window.contains(o.date) || !(o.price > s.lower) || o.price > upper || !(o.volume > 0.0)) continue;
    pts.push_back({o.price / s.price_unit, std::log(o.volume)});
  }
  return design_plot(pts, s.kink / s.price_unit, s.lower / s.price_unit, upper / s.price_unit, est.below,
                     est.above, bins_per_side);
}

DidPlotData did_plot_data(const Panel& panel, const DidEstimate& est) {
  const auto& s = est.spec;
  const std::set<ItemId> treated(s.treated.begin(), s.treated.end());
  const std::set<ItemId> control(s.control.begin(), s.control.end());
  std::map<int, std::array<std::pair<double, std::size_t>, 2>> acc;
  for (const auto& o : panel.observations()) {
    const bool t = treated.count(o.item) != 0;
    if (!t && !control.count(o.item)) continue;
    if (!s.window.contains(o.date)) continue;
    const double v = s.outcome == OutcomeVar::price ? o.price : o.volume;
    if (!(v > 0.0)) continue;
    auto& cell = acc[week_index(s.implementation, o.date)][t ? 1 : 0];
    cell.first += std::log(v);
    cell.second += 1;
  }
  DidPlotData out;
  out.theta = est.theta;
  out.ci_low = est.ci_low;
  out.ci_high = est.ci_high;
  for (const auto& [week, cells] : acc) {
    WeeklyLine line;
    line.week = week;
    if (cells[0].second) {
      line.has_control = true;
      line.control = cells[0].first / static_cast<double>(cells[0].second);
    }
    if (cells[1].second) {
      line.has_treated = true;
      line.treated = cells[1].first / static_cast<double>(cells[1].second);
      if (week >= 0) out.counterfactual.push_back({static_cast<double>(week), line.treated - est.theta});
    }
    out.weekly.push_back(line);
  }
  return out;
}

}  // namespace gelab::econometrics
