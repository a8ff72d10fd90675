#include "gelab/econometrics/did.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "fe_ols.hpp"
#include "gelab/econometrics/errors.hpp"
#include "gelab/econometrics/stats.hpp"

namespace gelab::econometrics {

DidEstimate did_estimate(const Panel& panel, const DidSpec& spec) {
  const std::set<ItemId> treated(spec.treated.begin(), spec.treated.end());
  const std::set<ItemId> control(spec.control.begin(), spec.control.end());
  for (ItemId id : treated) {
    if (control.count(id)) {
      throw EstimationError(EstimationErrc::GroupsOverlap, "item is in both treated and control sets",
                            {{"item_id", std::to_string(id.value)}});
    }
  }
  if (!(spec.level > 0.0 && spec.level < 1.0)) {
    throw EstimationError(EstimationErrc::InvalidSpec, "confidence level must lie in (0, 1)",
                          {{"level", std::to_string(spec.level)}});
  }

  DidEstimate est;
  est.spec = spec;
  struct Row {
    int group;
    double post;
    double treated;
    double y;
    double level;
  };
  std::vector<Row> rows;
  std::map<ItemId, int> group_of;
  std::set<ItemId> treated_seen;
  std::set<ItemId> control_seen;
  bool any_pre = false;
  bool any_post = false;
  for (const auto& o : panel.observations()) {
    const bool is_t = treated.count(o.item) != 0;
    if (!is_t && !control.count(o.item)) continue;
    if (!spec.window.contains(o.date)) continue;
    const double v = spec.outcome == OutcomeVar::price ? o.price : o.volume;
    if (!(v > 0.0)) {
      ++est.n_dropped_nonpositive;
      continue;
    }
    const bool post = o.date >= spec.implementation;
    any_pre |= !post;
    any_post |= post;
    auto [it, inserted] = group_of.try_emplace(o.item, static_cast<int>(group_of.size()));
    (is_t ? treated_seen : control_seen).insert(o.item);
    rows.push_back({it->second, post ? 1.0 : 0.0, is_t ? 1.0 : 0.0, std::log(v), v});
  }
  if (treated_seen.size() < 2 || control_seen.size() < 2) {
    throw EstimationError(EstimationErrc::TooFewItems, "each group needs at least two items with data",
                          {{"treated_items", std::to_string(treated_seen.size())},
                           {"control_items", std::to_string(control_seen.size())}});
  }
  if (!any_pre) throw EstimationError(EstimationErrc::NoPrePeriod, "no observations before implementation");
  if (!any_post) throw EstimationError(EstimationErrc::NoPostPeriod, "no observations on or after implementation");

  const auto n = static_cast<Eigen::Index>(rows.size());
  detail::FeDesign design;
  design.n_groups = static_cast<int>(group_of.size());
  design.group.resize(rows.size());
  design.x.resize(n, 2);
  design.y.resize(n);
  double level_sum = 0.0;
  double log_sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    design.group[static_cast<std::size_t>(i)] = r.group;
    design.x(i, 0) = r.post;
    design.x(i, 1) = r.post * r.treated;
    design.y(i) = r.y;
    level_sum += r.level;
    log_sum += r.y;
  }
  const auto fit = spec.method == DidMethod::within ? detail::fe_within(design, spec.se)
                                                    : detail::fe_dummies(design, spec.se);
  est.phi = fit.coef(0);
  est.theta = fit.coef(1);
  est.se_phi = std::sqrt(fit.cov(0, 0));
  est.se_theta = std::sqrt(fit.cov(1, 1));
  const double z = stats::normal_critical(spec.level);
  est.ci_low = est.theta - z * est.se_theta;
  est.ci_high = est.theta + z * est.se_theta;
  est.p_value = est.se_theta > 0.0 ? stats::normal_two_sided_p(est.theta / est.se_theta)
                                   : (est.theta == 0.0 ? 1.0 : 0.0);
  est.n_obs = rows.size();
  est.n_items = group_of.size();
  est.outcome_mean = level_sum / static_cast<double>(n);
  est.log_outcome_mean = log_sum / static_cast<double>(n);
  return est;
}

}  // namespace gelab::econometrics
