#include "gelab/econometrics/pretrends.hpp"

#include <cmath>
#include <map>
#include <set>
#include <string>

#include "fe_ols.hpp"
#include "gelab/econometrics/errors.hpp"
#include "gelab/econometrics/stats.hpp"

namespace gelab::econometrics {

PretrendsResult pretrends_test(const Panel& panel, const PretrendsSpec& spec) {
  const std::set<ItemId> treated(spec.treated.begin(), spec.treated.end());
  const std::set<ItemId> control(spec.control.begin(), spec.control.end());
  for (ItemId id : treated) {
    if (control.count(id)) {
      throw EstimationError(EstimationErrc::GroupsOverlap, "item is in both treated and control sets",
                            {{"item_id", std::to_string(id.value)}});
    }
  }
  const int span_days = days_between(spec.window_start, spec.implementation);
  if (span_days < 21) {
    throw EstimationError(EstimationErrc::WindowTooShort, "pre-window must cover at least 3 weeks",
                          {{"days", std::to_string(span_days)}});
  }

  PretrendsResult res;
  std::map<std::pair<int, bool>, std::pair<double, std::size_t>> weekly;
  std::map<ItemId, int> group_of;
  struct Row {
    int group;
    double t;
    double treated;
    double y;
  };
  std::vector<Row> rows;
  std::set<ItemId> t_seen;
  std::set<ItemId> c_seen;
  for (const auto& o : panel.observations()) {
    const bool is_t = treated.count(o.item) != 0;
    if (!is_t && !control.count(o.item)) continue;
    if (o.date < spec.window_start) continue;
    const bool pre = o.date < spec.implementation;
    if (!pre && !(spec.plot_end && o.date <= *spec.plot_end)) continue;
    const double v = spec.outcome == OutcomeVar::price ? o.price : o.volume;
    if (!(v > 0.0)) continue;
    const double y = std::log(v);
    auto& cell = weekly[{week_index(spec.implementation, o.date), is_t}];
    cell.first += y;
    cell.second += 1;
    if (!pre) continue;
    auto [it, inserted] = group_of.try_emplace(o.item, static_cast<int>(group_of.size()));
    (is_t ? t_seen : c_seen).insert(o.item);
    rows.push_back({it->second, days_between(spec.implementation, o.date) / 7.0, is_t ? 1.0 : 0.0, y});
  }
  if (t_seen.size() < 2 || c_seen.size() < 2) {
    throw EstimationError(EstimationErrc::TooFewItems, "each group needs at least two items with data",
                          {{"treated_items", std::to_string(t_seen.size())},
                           {"control_items", std::to_string(c_seen.size())}});
  }

  const auto n = static_cast<Eigen::Index>(rows.size());
  detail::FeDesign design;
  design.n_groups = static_cast<int>(group_of.size());
  design.group.resize(rows.size());
  design.x.resize(n, 2);
  design.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    design.group[static_cast<std::size_t>(i)] = r.group;
    design.x(i, 0) = r.t;
    design.x(i, 1) = r.t * r.treated;
    design.y(i) = r.y;
  }
  const auto fit = detail::fe_within(design, spec.se);
  res.slope_control = fit.coef(0);
  res.difference = fit.coef(1);
  res.slope_treated = res.slope_control + res.difference;
  res.se = std::sqrt(fit.cov(1, 1));
  const double z = stats::normal_critical(spec.level);
  res.ci_low = res.difference - z * res.se;
  res.ci_high = res.difference + z * res.se;
  res.p_value = res.se > 0.0 ? stats::normal_two_sided_p(res.difference / res.se)
                             : (res.difference == 0.0 ? 1.0 : 0.0);
  res.n_obs = rows.size();
  res.n_weeks = (span_days + 6) / 7;
  for (const auto& [key, cell] : weekly) {
    res.weekly.push_back({key.first, add_days(spec.implementation, 7 * key.first), key.second,
                          cell.first / static_cast<double>(cell.second), cell.second});
  }
  return res;
}

}  // namespace gelab::econometrics
