#include "gelab/exchange/market.hpp"

#include <algorithm>
#include <string>

namespace gelab::exchange {

const char* to_string(ExchangeErrc e) {
  switch (e) {
    case ExchangeErrc::InvalidOrder: return "InvalidOrder";
    case ExchangeErrc::UnknownItem: return "UnknownItem";
    case ExchangeErrc::UnknownPlayer: return "UnknownPlayer";
    case ExchangeErrc::UnknownOrder: return "UnknownOrder";
    case ExchangeErrc::InsufficientFunds: return "InsufficientFunds";
    case ExchangeErrc::InsufficientInventory: return "InsufficientInventory";
    case ExchangeErrc::BuyLimitExceeded: return "BuyLimitExceeded";
    case ExchangeErrc::OrderSlotsExhausted: return "OrderSlotsExhausted";
    case ExchangeErrc::InvalidPolicy: return "InvalidPolicy";
    case ExchangeErrc::ClockWentBackwards: return "ClockWentBackwards";
  }
  return "ExchangeError";
}

std::optional<Gp> OrderBook::best_bid() const {
  if (bids_.empty()) return std::nullopt;
  return bids_.begin()->first;
}

std::optional<Gp> OrderBook::best_ask() const {
  if (asks_.empty()) return std::nullopt;
  return asks_.begin()->first;
}

std::size_t OrderBook::resting_orders() const {
  std::size_t n = 0;
  for (const auto& [p, level] : bids_) n += level.size();
  for (const auto& [p, level] : asks_) n += level.size();
  return n;
}

namespace {

Gp checked_mul(Gp a, std::int64_t b, const char* what) {
  Gp out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw ExchangeError(ExchangeErrc::InvalidOrder, std::string(what) + " overflows 64-bit GP");
  }
  return out;
}

std::string id_str(std::int64_t v) { return std::to_string(v); }

}  // namespace

Market::Market(std::vector<ItemSpec> items, MarketRules rules) : rules_(std::move(rules)) {
  if (rules_.max_open_orders < 1 || rules_.buy_limit_window_minutes < 1) {
    throw ExchangeError(ExchangeErrc::InvalidPolicy, "order slots and buy-limit window must be positive");
  }
  if (rules_.tax) rules_.tax->validate();
  for (auto& spec : items) {
    if (spec.buy_limit < 1) {
      throw ExchangeError(ExchangeErrc::InvalidPolicy, "buy limit must be at least 1",
                          {{"item_id", id_str(spec.id.value)}});
    }
    const ItemId id = spec.id;
    if (!items_.emplace(id, std::move(spec)).second) {
      throw ExchangeError(ExchangeErrc::InvalidPolicy, "duplicate item id",
                          {{"item_id", id_str(id.value)}});
    }
    books_[id];
  }
}

void Market::open_account(PlayerId player, Gp initial_gp) {
  if (initial_gp < 0) throw ExchangeError(ExchangeErrc::InvalidOrder, "negative opening balance");
  auto [it, inserted] = accounts_.try_emplace(player);
  if (!inserted) {
    throw ExchangeError(ExchangeErrc::InvalidOrder, "account already exists",
                        {{"player_id", id_str(player.value)}});
  }
  it->second.gp = initial_gp;
  flows_.gp_deposited += initial_gp;
}

void Market::deposit_gp(PlayerId player, Gp amount) {
  if (amount < 0) throw ExchangeError(ExchangeErrc::InvalidOrder, "negative deposit");
  account_mut(player).gp += amount;
  flows_.gp_deposited += amount;
}

void Market::deposit_items(PlayerId player, ItemId item, std::int64_t quantity) {
  if (quantity < 0) throw ExchangeError(ExchangeErrc::InvalidOrder, "negative item deposit");
  item_spec(item);
  account_mut(player).inventory[item] += quantity;
  flows_.items_deposited[item] += quantity;
}

void Market::advance_to(SimTime t) {
  if (t < now_) {
    throw ExchangeError(ExchangeErrc::ClockWentBackwards, "simulated time cannot move backwards");
  }
  now_ = t;
}

void Market::set_tax(std::optional<TaxSchedule> tax) {
  if (tax) tax->validate();
  rules_.tax = tax;
}

Account& Market::account_mut(PlayerId player) {
  auto it = accounts_.find(player);
  if (it == accounts_.end()) {
    throw ExchangeError(ExchangeErrc::UnknownPlayer, "no account for player",
                        {{"player_id", id_str(player.value)}});
  }
  return it->second;
}

const Account& Market::account(PlayerId player) const {
  auto it = accounts_.find(player);
  if (it == accounts_.end()) {
    throw ExchangeError(ExchangeErrc::UnknownPlayer, "no account for player",
                        {{"player_id", id_str(player.value)}});
  }
  return it->second;
}

const ItemSpec& Market::item_spec(ItemId item) const {
  auto it = items_.find(item);
  if (it == items_.end()) {
    throw ExchangeError(ExchangeErrc::UnknownItem, "unknown item", {{"item_id", id_str(item.value)}});
  }
  return it->second;
}

const OrderBook& Market::book(ItemId item) const {
  item_spec(item);
  return books_.at(item);
}

OrderBook& Market::book_mut(ItemId item) {
  item_spec(item);
  return books_.at(item);
}

Market::PlayerItemState& Market::limit_state(PlayerId player, ItemId item) {
  return limits_[{player, item}];
}

void Market::expire_purchases(PlayerItemState& state) const {
  const std::int64_t horizon = now_.minutes - rules_.buy_limit_window_minutes;
  while (!state.purchases.empty() && state.purchases.front().minute <= horizon) {
    state.purchases.pop_front();
  }
}

std::int64_t Market::window_total(const PlayerItemState& state) const {
  const std::int64_t horizon = now_.minutes - rules_.buy_limit_window_minutes;
  std::int64_t total = 0;
  for (const auto& p : state.purchases) {
    if (p.minute > horizon) total += p.quantity;
  }
  return total;
}

std::int64_t Market::purchased_in_window(PlayerId player, ItemId item) const {
  auto it = limits_.find({player, item});
  return it == limits_.end() ? 0 : window_total(it->second);
}

std::int64_t Market::open_buy_quantity(PlayerId player, ItemId item) const {
  auto it = limits_.find({player, item});
  return it == limits_.end() ? 0 : it->second.open_buy;
}

Gp Market::unit_tax(Gp price) const { return rules_.tax ? apply_tax(price, *rules_.tax) : 0; }

void Market::record_purchase(PlayerId buyer, ItemId item, std::int64_t qty, bool was_resting) {
  auto& state = limit_state(buyer, item);
  expire_purchases(state);
  state.purchases.push_back({now_.minutes, qty});
  if (was_resting) state.open_buy -= qty;
}

Trade Market::settle(ItemId item, std::int64_t qty, Gp price, Order& buy_side, Order& sell_side,
                     Side taker, Gp taker_limit) {
  Account& buyer = accounts_.at(buy_side.player);
  Account& seller = accounts_.at(sell_side.player);
  const Gp tax = unit_tax(price) * qty;
  Gp refund = 0;
  if (taker == Side::buy) {
    buyer.escrow_gp -= taker_limit * qty;
    refund = (taker_limit - price) * qty;
    buyer.gp += refund;
  } else {
    buyer.escrow_gp -= price * qty;
  }
  buyer.inventory[item] += qty;
  seller.escrow_items[item] -= qty;
  seller.gp += price * qty - tax;
  coffer_ += tax;
  flows_.taxes_collected += tax;
  buy_side.remaining -= qty;
  sell_side.remaining -= qty;
  record_purchase(buy_side.player, item, qty, taker == Side::sell);

  Trade t;
  t.item = item;
  t.quantity = qty;
  t.price = price;
  t.buyer = buy_side.player;
  t.seller = sell_side.player;
  t.buyer_refund = refund;
  t.tax_paid = tax;
  t.date = now_.date();
  t.seq = next_trade_seq_++;
  t.time = now_;
  t.taker = taker;
  t.buy_order = buy_side.id;
  t.sell_order = sell_side.id;
  trades_.push_back(t);
  return t;
}

SubmitResult Market::submit_order(const OrderRequest& req) {
  const ItemSpec& spec = item_spec(req.item);
  if (req.quantity <= 0 || req.limit_price < 1) {
    throw ExchangeError(ExchangeErrc::InvalidOrder, "quantity and limit price must be positive",
                        {{"quantity", id_str(req.quantity)}, {"limit_price", id_str(req.limit_price)}});
  }
  Account& acct = account_mut(req.player);
  if (acct.open_orders >= rules_.max_open_orders) {
    throw ExchangeError(ExchangeErrc::OrderSlotsExhausted, "player has no free order slot",
                        {{"player_id", id_str(req.player.value)},
                         {"open_orders", std::to_string(acct.open_orders)}});
  }

  OrderBook& book = book_mut(req.item);
  Order order;
  order.player = req.player;
  order.side = req.side;
  order.item = req.item;
  order.limit_price = req.limit_price;
  order.quantity = req.quantity;
  order.remaining = req.quantity;

  if (req.side == Side::buy) {
    auto& state = limit_state(req.player, req.item);
    expire_purchases(state);
    const std::int64_t committed = window_total(state) + state.open_buy;
    if (committed + req.quantity > spec.buy_limit) {
      const std::int64_t reset = state.purchases.empty()
                                     ? now_.minutes
                                     : state.purchases.front().minute + rules_.buy_limit_window_minutes;
      throw ExchangeError(ExchangeErrc::BuyLimitExceeded, "purchase would exceed the item's buy limit",
                          {{"item_id", id_str(req.item.value)},
                           {"buy_limit", id_str(spec.buy_limit)},
                           {"committed", id_str(committed)},
                           {"reset_minute", id_str(reset)},
                           {"reset_date", format_date(SimTime{reset}.date())}});
    }
    const Gp needed = checked_mul(req.limit_price, req.quantity, "order value");
    if (acct.gp < needed) {
      throw ExchangeError(ExchangeErrc::InsufficientFunds, "not enough GP to cover the order",
                          {{"needed", id_str(needed)}, {"available", id_str(acct.gp)}});
    }
    acct.gp -= needed;
    acct.escrow_gp += needed;
  } else {
    auto inv = acct.inventory.find(req.item);
    const std::int64_t have = inv == acct.inventory.end() ? 0 : inv->second;
    if (have < req.quantity) {
      throw ExchangeError(ExchangeErrc::InsufficientInventory, "not enough units to sell",
                          {{"needed", id_str(req.quantity)}, {"available", id_str(have)}});
    }
    inv->second -= req.quantity;
    acct.escrow_items[req.item] += req.quantity;
  }

  order.id = OrderId{next_order_id_++};
  order.arrival_seq = next_arrival_++;

  SubmitResult result;
  result.order_id = order.id;

  if (req.side == Side::buy) {
    auto& asks = book.asks_;
    while (order.remaining > 0 && !asks.empty() && asks.begin()->first <= order.limit_price) {
      auto level_it = asks.begin();
      auto& level = level_it->second;
      Order& maker = level.front();
      const std::int64_t qty = std::min(order.remaining, maker.remaining);
      result.trades.push_back(settle(req.item, qty, level_it->first, order, maker, Side::buy, order.limit_price));
      if (maker.remaining == 0) {
        accounts_.at(maker.player).open_orders -= 1;
        resting_.erase(maker.id);
        level.pop_front();
        if (level.empty()) asks.erase(level_it);
      }
    }
  } else {
    auto& bids = book.bids_;
    while (order.remaining > 0 && !bids.empty() && bids.begin()->first >= order.limit_price) {
      auto level_it = bids.begin();
      auto& level = level_it->second;
      Order& maker = level.front();
      const std::int64_t qty = std::min(order.remaining, maker.remaining);
      result.trades.push_back(settle(req.item, qty, level_it->first, maker, order, Side::sell, order.limit_price));
      if (maker.remaining == 0) {
        accounts_.at(maker.player).open_orders -= 1;
        resting_.erase(maker.id);
        level.pop_front();
        if (level.empty()) bids.erase(level_it);
      }
    }
  }

  if (order.remaining > 0) {
    result.resting = order.remaining;
    accounts_.at(req.player).open_orders += 1;
    resting_.emplace(order.id, OrderLocator{order.item, order.side, order.limit_price});
    if (order.side == Side::buy) {
      limit_state(req.player, req.item).open_buy += order.remaining;
      book.bids_[order.limit_price].push_back(order);
    } else {
      book.asks_[order.limit_price].push_back(order);
    }
  }
  return result;
}

bool Market::cancel_order(OrderId id) {
  auto loc_it = resting_.find(id);
  if (loc_it == resting_.end()) return false;
  const OrderLocator loc = loc_it->second;
  OrderBook& book = books_.at(loc.item);

  auto release = [&](auto& levels) {
    auto level_it = levels.find(loc.price);
    auto& level = level_it->second;
    auto it = std::find_if(level.begin(), level.end(), [&](const Order& o) { return o.id == id; });
    const Order o = *it;
    Account& acct = accounts_.at(o.player);
    if (o.side == Side::buy) {
      const Gp locked = o.limit_price * o.remaining;
      acct.escrow_gp -= locked;
      acct.gp += locked;
      limit_state(o.player, o.item).open_buy -= o.remaining;
    } else {
      acct.escrow_items[o.item] -= o.remaining;
      acct.inventory[o.item] += o.remaining;
    }
    acct.open_orders -= 1;
    level.erase(it);
    if (level.empty()) levels.erase(level_it);
  };
  if (loc.side == Side::buy) {
    release(book.bids_);
  } else {
    release(book.asks_);
  }
  resting_.erase(loc_it);
  return true;
}

void Market::cancel_all() {
  std::vector<OrderId> ids;
  ids.reserve(resting_.size());
  for (const auto& [id, loc] : resting_) ids.push_back(id);
  std::sort(ids.begin(), ids.end());
  for (OrderId id : ids) cancel_order(id);
}

std::vector<Removal> Market::run_sink_day(const SinkPolicy& policy, Date date) {
  if (!policy.active_on(date)) return {};
  if (policy.target_items.empty() || policy.daily_max < 1) {
    throw ExchangeError(ExchangeErrc::InvalidPolicy, "active sink needs targets and a positive daily maximum");
  }
  for (ItemId item : policy.target_items) item_spec(item);

  std::vector<Removal> out;
  for (ItemId item : policy.target_items) {
    auto& removed = sink_removed_[{item, date}];
    auto& asks = books_.at(item).asks_;
    while (removed < policy.daily_max && !asks.empty()) {
      auto level_it = asks.begin();
      const Gp price = level_it->first;
      if (coffer_ < price) break;
      auto& level = level_it->second;
      Order& maker = level.front();
      const std::int64_t qty =
          std::min({maker.remaining, policy.daily_max - removed, coffer_ / price});
      Account& seller = accounts_.at(maker.player);
      coffer_ -= price * qty;
      flows_.sink_spent += price * qty;
      seller.gp += price * qty;
      seller.escrow_items[item] -= qty;
      flows_.items_removed[item] += qty;
      maker.remaining -= qty;
      removed += qty;
      out.push_back(Removal{date, item, qty, price, maker.player});
      if (maker.remaining == 0) {
        seller.open_orders -= 1;
        resting_.erase(maker.id);
        level.pop_front();
        if (level.empty()) asks.erase(level_it);
      }
    }
  }
  removals_.insert(removals_.end(), out.begin(), out.end());
  return out;
}

MarketSnapshot Market::snapshot() const {
  MarketSnapshot s;
  s.time = now_;
  s.coffer = coffer_;
  for (const auto& [id, book] : books_) s.quotes[id] = Quote{book.best_bid(), book.best_ask()};
  s.trade_count = trades_.size();
  s.removal_count = removals_.size();
  return s;
}

}  // namespace gelab::exchange
