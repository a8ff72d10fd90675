#pragma once

#include <span>
#include <vector>

#include "gelab/date.hpp"
#include "gelab/panel.hpp"

namespace gelab::econometrics {

struct IndexPoint {
  int week = 0;
  Date week_start;
  double mean_price = 0.0;
  double total_volume = 0.0;
  double index = 0.0;
};

/// Base-100 volume-weighted price index for one item group. Weeks are 7-day bins anchored at
/// `base_date` (week 0 is the base week).
struct PriceIndexSeries {
  std::vector<ItemId> group;
  Date base_date;
  std::vector<IndexPoint> points;

  const IndexPoint* find(int week) const;
};

/// Errors: EmptyGroup when the group has no observations in range; ZeroVolumeWeek (with
/// `week`) when a week between the first and last observed week, or the base week, has no
/// volume.
PriceIndexSeries price_index(const Panel& panel, std::span<const ItemId> group, Date base_date,
                             DateWindow range = {});

}  // namespace gelab::econometrics
