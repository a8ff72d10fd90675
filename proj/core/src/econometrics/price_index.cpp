#include "gelab/econometrics/price_index.hpp"

#include <map>
#include <set>
#include <string>

#include "gelab/econometrics/errors.hpp"

namespace gelab::econometrics {

const IndexPoint* PriceIndexSeries::find(int week) const {
  for (const auto& p : points) {
    if (p.week == week) return &p;
  }
  return nullptr;
}

PriceIndexSeries price_index(const Panel& panel, std::span<const ItemId> group, Date base_date,
                             DateWindow range) {
  const std::set<ItemId> members(group.begin(), group.end());
  if (members.empty()) throw EstimationError(EstimationErrc::EmptyGroup, "item group is empty");

  struct Acc {
    long double weighted = 0;
    long double volume = 0;
  };
  std::map<int, Acc> weeks;
  for (ItemId item : members) {
    for (const auto& o : panel.series(item)) {
      if (!range.contains(o.date)) continue;
      auto& a = weeks[week_index(base_date, o.date)];
      a.weighted += static_cast<long double>(o.price) * o.volume;
      a.volume += o.volume;
    }
  }
  if (weeks.empty()) {
    throw EstimationError(EstimationErrc::EmptyGroup, "item group has no observations in range");
  }
  const int first = std::min(weeks.begin()->first, 0);
  const int last = std::max(weeks.rbegin()->first, 0);
  auto zero_week = [&](int w) {
    return EstimationError(EstimationErrc::ZeroVolumeWeek, "week has no trading volume in the group",
                           {{"week", std::to_string(w)},
                            {"week_start", format_date(add_days(base_date, 7 * w))}});
  };
  for (int w = first; w <= last; ++w) {
    auto it = weeks.find(w);
    if (it == weeks.end() || !(it->second.volume > 0)) throw zero_week(w);
  }

  PriceIndexSeries out;
  out.group.assign(members.begin(), members.end());
  out.base_date = base_date;
  const Acc& base = weeks.at(0);
  const double base_mean = static_cast<double>(base.weighted / base.volume);
  for (int w = first; w <= last; ++w) {
    const Acc& a = weeks.at(w);
    const double mean = static_cast<double>(a.weighted / a.volume);
    out.points.push_back({w, add_days(base_date, 7 * w), mean, static_cast<double>(a.volume),
                          100.0 * (mean / base_mean)});
  }
  return out;
}

}  // namespace gelab::econometrics
