// Randomized order streams checked against the ledger invariants.
#include <gtest/gtest.h>

#include <random>

#include "gelab/exchange/market.hpp"

using namespace gelab;
using namespace gelab::exchange;

namespace {

struct Totals {
  Gp gp = 0;
  std::map<ItemId, std::int64_t> items;
};

Totals totals(const Market& m) {
  Totals t;
  t.gp = m.coffer_balance();
  for (const auto& [id, a] : m.accounts()) {
    t.gp += a.gp + a.escrow_gp;
    for (const auto& [item, q] : a.inventory) t.items[item] += q;
    for (const auto& [item, q] : a.escrow_items) t.items[item] += q;
  }
  return t;
}

struct StreamParams {
  int n_items = 4;
  int n_players = 12;
  std::int64_t buy_limit = 40;
};

// Generates one random action per call: order, cancel, clock step, faucet or sink day.
class Driver {
 public:
  Driver(std::uint64_t seed, StreamParams p) : rng_(seed), p_(p) {
    std::vector<ItemSpec> items;
    for (int i = 1; i <= p.n_items; ++i) items.push_back(ItemSpec{ItemId{i}, "item", p.buy_limit, i % 2 == 0});
    MarketRules rules;
    rules.tax = TaxSchedule{};
    market_ = std::make_unique<Market>(items, rules);
    for (int j = 1; j <= p.n_players; ++j) {
      market_->open_account(PlayerId{j}, 5'000'000);
      for (int i = 1; i <= p.n_items; ++i) market_->deposit_items(PlayerId{j}, ItemId{i}, 20);
    }
  }

  Market& market() { return *market_; }
  std::mt19937_64& rng() { return rng_; }

  OrderRequest random_order() {
    OrderRequest r;
    r.player = PlayerId{1 + static_cast<std::int64_t>(rng_() % p_.n_players)};
    r.item = ItemId{1 + static_cast<std::int64_t>(rng_() % p_.n_items)};
    r.side = rng_() % 2 ? Side::buy : Side::sell;
    // Prices straddle the 100 GP floor so some trades are taxed and some are not.
    r.limit_price = 60 + static_cast<Gp>(rng_() % 120) + (r.item.value % 2 == 0 ? 10'000 : 0);
    r.quantity = 1 + static_cast<std::int64_t>(rng_() % 6);
    return r;
  }

 private:
  std::mt19937_64 rng_;
  StreamParams p_;
  std::unique_ptr<Market> market_;
};

}  // namespace

TEST(ExchangeProperties, ConservationNoCrossTakerBenefit) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Driver drv(seed, {});
    Market& m = drv.market();
    Totals expected = totals(m);
    std::int64_t minute = 0;
    std::size_t prev_removed = 0;
    for (int step = 0; step < 6000; ++step) {
      const auto action = drv.rng()() % 100;
      if (action < 85) {
        const OrderRequest req = drv.random_order();
        try {
          const auto res = m.submit_order(req);
          for (const Trade& t : res.trades) {
            if (req.side == Side::buy) {
              ASSERT_LE(t.price, req.limit_price);
              ASSERT_EQ(t.buyer_refund, (req.limit_price - t.price) * t.quantity);
            } else {
              ASSERT_GE(t.price, req.limit_price);
              ASSERT_EQ(t.buyer_refund, 0);
            }
            ASSERT_GT(t.price, 0);
          }
        } catch (const ExchangeError&) {
        }
      } else if (action < 92) {
        minute += 1 + static_cast<std::int64_t>(drv.rng()() % 120);
        m.advance_to(SimTime{minute});
      } else if (action < 95) {
        const PlayerId p{1 + static_cast<std::int64_t>(drv.rng()() % 12)};
        m.deposit_gp(p, 1000);
        expected.gp += 1000;
        m.deposit_items(p, ItemId{1}, 2);
        expected.items[ItemId{1}] += 2;
      } else if (action < 97) {
        m.cancel_all();
      } else {
        const SinkPolicy pol{{ItemId{2}, ItemId{4}}, 3, make_date(1970, 1, 1)};
        m.run_sink_day(pol, SimTime{minute}.date());
      }
      // Removals leave the item system; GP never leaves it (sink pays sellers from the coffer).
      for (std::size_t k = prev_removed; k < m.removal_log().size(); ++k) {
        expected.items[m.removal_log()[k].item] -= m.removal_log()[k].quantity;
      }
      prev_removed = m.removal_log().size();
      const Totals now = totals(m);
      ASSERT_EQ(now.gp, expected.gp) << "step " << step;
      ASSERT_EQ(now.items, expected.items) << "step " << step;
      for (const auto& [id, spec] : m.items()) {
        const auto bid = m.book(id).best_bid();
        const auto ask = m.book(id).best_ask();
        if (bid && ask) ASSERT_LT(*bid, *ask);
      }
      for (const auto& [id, a] : m.accounts()) {
        ASSERT_GE(a.gp, 0);
        ASSERT_GE(a.escrow_gp, 0);
        ASSERT_LE(a.open_orders, 8);
      }
      ASSERT_GE(m.coffer_balance(), 0);
    }
    EXPECT_GT(m.trade_log().size(), 1000u);
    Gp taxes = 0;
    for (const Trade& t : m.trade_log()) taxes += t.tax_paid;
    EXPECT_EQ(taxes, m.external_flows().taxes_collected);
    EXPECT_EQ(m.coffer_balance(), taxes - m.external_flows().sink_spent);
  }
}

TEST(ExchangeProperties, Determinism) {
  auto run = [](std::uint64_t seed) {
    Driver drv(seed, {});
    for (int step = 0; step < 3000; ++step) {
      try {
        drv.market().submit_order(drv.random_order());
      } catch (const ExchangeError&) {
      }
      if (step % 200 == 199) drv.market().cancel_all();
    }
    return drv.market().trade_log();
  };
  const auto a = run(99);
  const auto b = run(99);
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, b);
}

TEST(ExchangeProperties, BuyLimitWindowNeverExceeded) {
  StreamParams p;
  p.buy_limit = 7;
  Driver drv(5, p);
  Market& m = drv.market();
  std::int64_t minute = 0;
  for (int step = 0; step < 8000; ++step) {
    if (drv.rng()() % 10 == 0) {
      minute += static_cast<std::int64_t>(drv.rng()() % 90);
      m.advance_to(SimTime{minute});
    }
    if (drv.rng()() % 50 == 0) m.cancel_all();
    try {
      m.submit_order(drv.random_order());
    } catch (const ExchangeError&) {
    }
  }
  // Every 240-minute window of each (buyer, item) purchase history stays within the limit.
  std::map<std::pair<PlayerId, ItemId>, std::vector<std::pair<std::int64_t, std::int64_t>>> buys;
  for (const Trade& t : m.trade_log()) buys[{t.buyer, t.item}].emplace_back(t.time.minutes, t.quantity);
  std::size_t checked = 0;
  for (const auto& [key, hist] : buys) {
    for (std::size_t i = 0; i < hist.size(); ++i) {
      std::int64_t total = 0;
      for (std::size_t j = i; j < hist.size() && hist[j].first < hist[i].first + 240; ++j) total += hist[j].second;
      ASSERT_LE(total, p.buy_limit);
      ++checked;
    }
  }
  EXPECT_GT(checked, 100u);
}
