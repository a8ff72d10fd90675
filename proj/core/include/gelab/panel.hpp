#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gelab/date.hpp"
#include "gelab/ids.hpp"

namespace gelab {

/// One item-day of market data.
struct PanelObservation {
  ItemId item;
  Date date;
  double price = 0.0;
  double volume = 0.0;

  friend bool operator==(const PanelObservation&, const PanelObservation&) = default;
};

enum class Provenance { simulated, ingested };

enum class EffectKind { rd_step, rk_slope, did_level };

enum class OutcomeVar { price, volume };

/// A treatment effect planted into generated data, in log points.
///
/// rd_step:   log volume += magnitude * 1{price >= cutoff}
/// rk_slope:  log volume += magnitude * T(price / price_unit), T the kinked tax schedule
///            (slope 1/100 below `cutoff / price_unit`, flat above)
/// did_level: log outcome += magnitude for `items` (or the named `item_set`) from `effect_date`
struct InjectedEffect {
  EffectKind kind = EffectKind::did_level;
  double magnitude = 0.0;
  double cutoff = 0.0;
  double price_unit = 1.0;
  std::vector<ItemId> items;
  std::string item_set;
  std::optional<Date> effect_date;
  OutcomeVar outcome = OutcomeVar::volume;

  friend bool operator==(const InjectedEffect&, const InjectedEffect&) = default;
};

struct PanelMetadata {
  Provenance provenance = Provenance::ingested;
  std::optional<std::vector<InjectedEffect>> ground_truth;
  /// Named item groups (sink rounds, treated sets, ...).
  std::map<std::string, std::vector<ItemId>> item_sets;
  std::map<std::string, std::string> attributes;

  friend bool operator==(const PanelMetadata&, const PanelMetadata&) = default;
};

/// Long-format daily (item, date, price, volume) table, sorted by (item, date).
///
/// Construction validates: at most one row per (item, date); finite values; volume >= 0;
/// price > 0 wherever volume > 0. Violations throw gelab::Error ("DuplicateKey",
/// "NonPositivePrice", "InvalidObservation") with the offending input position in details.
class Panel {
 public:
  Panel() = default;
  explicit Panel(std::vector<PanelObservation> observations, PanelMetadata metadata = {});

  std::span<const PanelObservation> observations() const { return observations_; }
  std::size_t size() const { return observations_.size(); }
  bool empty() const { return observations_.empty(); }

  const PanelMetadata& metadata() const { return metadata_; }
  PanelMetadata& metadata() { return metadata_; }

  /// Distinct item ids in ascending order.
  std::vector<ItemId> items() const;
  /// Observations for one item in date order; empty when the item is absent.
  std::span<const PanelObservation> series(ItemId item) const;
  bool contains(ItemId item) const;

  std::optional<Date> first_date() const;
  std::optional<Date> last_date() const;

  friend bool operator==(const Panel& a, const Panel& b) {
    return a.observations_ == b.observations_ && a.metadata_ == b.metadata_;
  }

 private:
  struct Range {
    std::size_t begin;
    std::size_t end;
  };
  std::vector<PanelObservation> observations_;
  std::map<ItemId, Range> index_;
  PanelMetadata metadata_;
};

}  // namespace gelab
