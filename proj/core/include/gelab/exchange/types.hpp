#pragma once

#include <cstdint>
#include <set>
#include <string>

#include "gelab/date.hpp"
#include "gelab/error.hpp"
#include "gelab/ids.hpp"

namespace gelab::exchange {

enum class Side : std::uint8_t { buy, sell };

inline constexpr std::int64_t kMinutesPerDay = 24 * 60;

/// Simulated wall clock, minutes since 1970-01-01T00:00.
struct SimTime {
  std::int64_t minutes = 0;

  static SimTime start_of(Date d) { return SimTime{d.time_since_epoch().count() * kMinutesPerDay}; }
  Date date() const {
    const std::int64_t day = minutes >= 0 ? minutes / kMinutesPerDay
                                          : -((-minutes + kMinutesPerDay - 1) / kMinutesPerDay);
    return Date{std::chrono::days{day}};
  }
  friend constexpr auto operator<=>(const SimTime&, const SimTime&) = default;
};

struct ItemSpec {
  ItemId id;
  std::string name;
  /// Units purchasable per player per rolling 4-hour window.
  std::int64_t buy_limit = 1;
  /// Average price above 100,000 GP.
  bool high_level = false;
};

/// What a player submits; the market assigns id and arrival sequence.
struct OrderRequest {
  PlayerId player;
  Side side = Side::buy;
  ItemId item;
  Gp limit_price = 0;
  std::int64_t quantity = 0;
};

struct Order {
  OrderId id;
  PlayerId player;
  Side side = Side::buy;
  ItemId item;
  Gp limit_price = 0;
  std::int64_t quantity = 0;
  std::int64_t remaining = 0;
  std::uint64_t arrival_seq = 0;
};

struct Trade {
  ItemId item;
  std::int64_t quantity = 0;
  Gp price = 0;
  PlayerId buyer;
  PlayerId seller;
  /// Total returned to a taking buyer: (limit - price) * quantity. Zero when the buyer rested.
  Gp buyer_refund = 0;
  /// Total withheld from the seller: apply_tax(price) * quantity.
  Gp tax_paid = 0;
  Date date;
  std::uint64_t seq = 0;
  SimTime time;
  Side taker = Side::buy;
  OrderId buy_order;
  OrderId sell_order;

  friend bool operator==(const Trade&, const Trade&) = default;
};

/// Units bought by the sink from one resting order and destroyed.
struct Removal {
  Date date;
  ItemId item;
  std::int64_t quantity = 0;
  /// Per-unit price paid out of the coffer.
  Gp price_paid = 0;
  PlayerId seller;

  friend bool operator==(const Removal&, const Removal&) = default;
};

struct SinkPolicy {
  std::set<ItemId> target_items;
  std::int64_t daily_max = 1;
  Date active_from;

  bool active_on(Date d) const { return d >= active_from; }
};

enum class ExchangeErrc {
  InvalidOrder,
  UnknownItem,
  UnknownPlayer,
  UnknownOrder,
  InsufficientFunds,
  InsufficientInventory,
  BuyLimitExceeded,
  OrderSlotsExhausted,
  InvalidPolicy,
  ClockWentBackwards,
};

const char* to_string(ExchangeErrc e);

class ExchangeError : public Error {
 public:
  ExchangeError(ExchangeErrc kind, const std::string& message, Details details = {})
      : Error(to_string(kind), message, std::move(details)), kind_(kind) {}
  ExchangeErrc kind() const noexcept { return kind_; }

 private:
  ExchangeErrc kind_;
};

}  // namespace gelab::exchange
