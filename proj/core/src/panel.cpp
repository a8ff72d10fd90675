#include "gelab/panel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gelab/error.hpp"

namespace gelab {

Panel::Panel(std::vector<PanelObservation> observations, PanelMetadata metadata)
    : metadata_(std::move(metadata)) {
  for (std::size_t i = 0; i < observations.size(); ++i) {
    const auto& o = observations[i];
    if (!std::isfinite(o.price) || !std::isfinite(o.volume) || o.volume < 0.0) {
      throw Error("InvalidObservation", "observation has non-finite value or negative volume",
                  {{"index", std::to_string(i)}, {"item_id", std::to_string(o.item.value)},
                   {"date", format_date(o.date)}});
    }
    if (o.price <= 0.0 && o.volume > 0.0) {
      throw Error("NonPositivePrice", "price must be positive where volume is positive",
                  {{"index", std::to_string(i)}, {"item_id", std::to_string(o.item.value)},
                   {"date", format_date(o.date)}});
    }
  }

  std::vector<std::size_t> order(observations.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& x = observations[a];
    const auto& y = observations[b];
    return std::tie(x.item, x.date) < std::tie(y.item, y.date);
  });
  observations_.reserve(observations.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& o = observations[order[k]];
    if (!observations_.empty() && observations_.back().item == o.item &&
        observations_.back().date == o.date) {
      throw Error("DuplicateKey", "duplicate (item, date) observation",
                  {{"index", std::to_string(order[k])}, {"item_id", std::to_string(o.item.value)},
                   {"date", format_date(o.date)}});
    }
    observations_.push_back(o);
  }

  std::size_t begin = 0;
  for (std::size_t i = 1; i <= observations_.size(); ++i) {
    if (i == observations_.size() || observations_[i].item != observations_[begin].item) {
      index_.emplace(observations_[begin].item, Range{begin, i});
      begin = i;
    }
  }
}

std::vector<ItemId> Panel::items() const {
  std::vector<ItemId> out;
  out.reserve(index_.size());
  for (const auto& [id, range] : index_) out.push_back(id);
  return out;
}

std::span<const PanelObservation> Panel::series(ItemId item) const {
  auto it = index_.find(item);
  if (it == index_.end()) return {};
  return std::span<const PanelObservation>(observations_).subspan(
      it->second.begin, it->second.end - it->second.begin);
}

bool Panel::contains(ItemId item) const { return index_.count(item) != 0; }

std::optional<Date> Panel::first_date() const {
  if (observations_.empty()) return std::nullopt;
  Date best = observations_.front().date;
  for (const auto& o : observations_) best = std::min(best, o.date);
  return best;
}

std::optional<Date> Panel::last_date() const {
  if (observations_.empty()) return std::nullopt;
  Date best = observations_.front().date;
  for (const auto& o : observations_) best = std::max(best, o.date);
  return best;
}

}  // namespace gelab
