#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "gelab/exchange/tax.hpp"
#include "gelab/exchange/types.hpp"

namespace gelab::exchange {

/// Resting orders for one item. Bids best-first by descending price, asks by ascending price;
/// each price level is FIFO in arrival order.
class OrderBook {
 public:
  using BidLevels = std::map<Gp, std::deque<Order>, std::greater<>>;
  using AskLevels = std::map<Gp, std::deque<Order>, std::less<>>;

  std::optional<Gp> best_bid() const;
  std::optional<Gp> best_ask() const;
  const BidLevels& bids() const { return bids_; }
  const AskLevels& asks() const { return asks_; }
  std::size_t resting_orders() const;

 private:
  friend class Market;
  BidLevels bids_;
  AskLevels asks_;
};

struct Account {
  Gp gp = 0;
  /// GP locked behind resting buy orders (limit * remaining).
  Gp escrow_gp = 0;
  std::map<ItemId, std::int64_t> inventory;
  /// Units locked behind resting sell orders.
  std::map<ItemId, std::int64_t> escrow_items;
  int open_orders = 0;
};

struct MarketRules {
  int max_open_orders = 8;
  std::int64_t buy_limit_window_minutes = 240;
  /// No tax is charged while unset.
  std::optional<TaxSchedule> tax;
};

/// Everything that entered or left the closed GP/item system from outside matching.
struct ExternalFlows {
  Gp gp_deposited = 0;
  Gp taxes_collected = 0;
  Gp sink_spent = 0;
  std::map<ItemId, std::int64_t> items_deposited;
  std::map<ItemId, std::int64_t> items_removed;
};

struct SubmitResult {
  OrderId order_id;
  std::vector<Trade> trades;
  /// Units left resting in the book (0 when fully filled).
  std::int64_t resting = 0;
};

struct Quote {
  std::optional<Gp> best_bid;
  std::optional<Gp> best_ask;
};

/// Immutable value copy of market aggregates; safe to hand to other threads.
struct MarketSnapshot {
  SimTime time;
  Gp coffer = 0;
  std::map<ItemId, Quote> quotes;
  std::size_t trade_count = 0;
  std::size_t removal_count = 0;
};

/// Order-matching exchange with buy limits, order slots, seller tax and a tax-funded item sink.
///
/// All mutation goes through one instance; callers serialize access. Every operation validates
/// first and then mutates, so a thrown ExchangeError leaves the ledger untouched.
class Market {
 public:
  explicit Market(std::vector<ItemSpec> items, MarketRules rules = {});

  void open_account(PlayerId player, Gp initial_gp = 0);
  bool has_account(PlayerId player) const { return accounts_.count(player) != 0; }
  /// External GP faucet (income). Recorded in external_flows().
  void deposit_gp(PlayerId player, Gp amount);
  /// External item faucet (production). Recorded in external_flows().
  void deposit_items(PlayerId player, ItemId item, std::int64_t quantity);

  void advance_to(SimTime t);
  SimTime now() const { return now_; }

  void set_tax(std::optional<TaxSchedule> tax);
  const std::optional<TaxSchedule>& tax() const { return rules_.tax; }

  /// Matches against the opposite side by price then arrival, executing at the resting price.
  /// Unfilled quantity rests. Throws ExchangeError on any precondition failure.
  SubmitResult submit_order(const OrderRequest& request);

  /// Returns false when the order is not resting (already filled or unknown).
  bool cancel_order(OrderId id);
  /// Cancels every resting order of every item (end-of-day expiry).
  void cancel_all();

  /// Sink purchases for one day: best resting asks of each target item are bought out of the
  /// coffer and destroyed until the daily maximum, the coffer, or the book runs out.
  std::vector<Removal> run_sink_day(const SinkPolicy& policy, Date date);

  const OrderBook& book(ItemId item) const;
  const Account& account(PlayerId player) const;
  const std::map<PlayerId, Account>& accounts() const { return accounts_; }
  const std::map<ItemId, ItemSpec>& items() const { return items_; }
  Gp coffer_balance() const { return coffer_; }
  const ExternalFlows& external_flows() const { return flows_; }
  const std::vector<Trade>& trade_log() const { return trades_; }
  const std::vector<Removal>& removal_log() const { return removals_; }

  /// Units of `item` the player bought inside the rolling window ending now.
  std::int64_t purchased_in_window(PlayerId player, ItemId item) const;
  /// Remaining quantity of the player's resting buy orders for `item`.
  std::int64_t open_buy_quantity(PlayerId player, ItemId item) const;

  MarketSnapshot snapshot() const;

 private:
  struct Purchase {
    std::int64_t minute;
    std::int64_t quantity;
  };
  struct PlayerItemState {
    std::deque<Purchase> purchases;
    std::int64_t open_buy = 0;
  };
  struct OrderLocator {
    ItemId item;
    Side side;
    Gp price;
  };

  Account& account_mut(PlayerId player);
  const ItemSpec& item_spec(ItemId item) const;
  OrderBook& book_mut(ItemId item);
  PlayerItemState& limit_state(PlayerId player, ItemId item);
  void expire_purchases(PlayerItemState& state) const;
  std::int64_t window_total(const PlayerItemState& state) const;
  Gp unit_tax(Gp price) const;

  Trade settle(ItemId item, std::int64_t qty, Gp price, Order& buy_side, Order& sell_side,
               Side taker, Gp taker_limit);
  void record_purchase(PlayerId buyer, ItemId item, std::int64_t qty, bool was_resting);

  std::map<ItemId, ItemSpec> items_;
  MarketRules rules_;
  std::map<ItemId, OrderBook> books_;
  std::map<PlayerId, Account> accounts_;
  std::map<std::pair<PlayerId, ItemId>, PlayerItemState> limits_;
  std::unordered_map<OrderId, OrderLocator> resting_;
  std::map<std::pair<ItemId, Date>, std::int64_t> sink_removed_;
  std::vector<Trade> trades_;
  std::vector<Removal> removals_;
  ExternalFlows flows_;
  Gp coffer_ = 0;
  SimTime now_{};
  std::int64_t next_order_id_ = 1;
  std::uint64_t next_arrival_ = 1;
  std::uint64_t next_trade_seq_ = 1;
};

}  // namespace gelab::exchange
