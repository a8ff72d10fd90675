#include <gtest/gtest.h>

#include <numeric>

#include "gelab/exchange/market.hpp"

using namespace gelab;
using namespace gelab::exchange;

namespace {

const ItemId kItem{7};
const PlayerId kSeller{1};
const PlayerId kBuyer{2};
const Date kDay = make_date(2021, 12, 9);

std::int64_t removed_units(const std::vector<Removal>& rs) {
  return std::accumulate(rs.begin(), rs.end(), std::int64_t{0},
                         [](std::int64_t a, const Removal& r) { return a + r.quantity; });
}

// Market with five single-unit asks at 1000..1004 and `coffer` GP of tax receipts.
Market market_with_coffer(Gp coffer) {
  Market m({ItemSpec{kItem, "dragon claws", 1'000'000, true}});
  m.open_account(kSeller, 0);
  m.open_account(kBuyer, 1'000'000'000);
  if (coffer > 0) {
    // One taxed sale at 100 * coffer GP leaves exactly `coffer` in the coffer.
    m.set_tax(TaxSchedule{});
    m.deposit_items(kSeller, kItem, 1);
    m.submit_order({kBuyer, Side::buy, kItem, coffer * 100, 1});
    m.submit_order({kSeller, Side::sell, kItem, coffer * 100, 1});
    m.set_tax(std::nullopt);
  }
  m.deposit_items(kSeller, kItem, 5);
  for (int i = 0; i < 5; ++i) m.submit_order({kSeller, Side::sell, kItem, 1000 + i, 1});
  return m;
}

SinkPolicy policy(std::int64_t daily_max) { return SinkPolicy{{kItem}, daily_max, kDay}; }

}  // namespace

TEST(RunSinkDay, EmptyCofferRemovesNothing) {
  Market m = market_with_coffer(0);
  ASSERT_EQ(m.coffer_balance(), 0);
  EXPECT_TRUE(m.run_sink_day(policy(10), kDay).empty());
  EXPECT_EQ(m.book(kItem).asks().size(), 5u);
}

TEST(RunSinkDay, DailyMaxBinds) {
  Market m = market_with_coffer(1'000'000);
  const auto rs = m.run_sink_day(policy(3), kDay);
  EXPECT_EQ(removed_units(rs), 3);
  EXPECT_EQ(m.book(kItem).asks().size(), 2u);
  // A second call on the same day adds nothing; the next day the cap resets.
  EXPECT_TRUE(m.run_sink_day(policy(3), kDay).empty());
  EXPECT_EQ(removed_units(m.run_sink_day(policy(3), add_days(kDay, 1))), 2);
}

TEST(RunSinkDay, HandLedgerAtSingleLevel) {
  Market m({ItemSpec{kItem, "dragon claws", 1'000'000, true}});
  m.open_account(kSeller, 0);
  m.open_account(kBuyer, 10'000'000);
  m.set_tax(TaxSchedule{});
  m.deposit_items(kSeller, kItem, 1);
  m.submit_order({kBuyer, Side::buy, kItem, 200'000, 1});
  m.submit_order({kSeller, Side::sell, kItem, 200'000, 1});
  ASSERT_EQ(m.coffer_balance(), 2000);
  m.deposit_items(kSeller, kItem, 4);
  for (int i = 0; i < 4; ++i) m.submit_order({kSeller, Side::sell, kItem, 1000, 1});
  const Gp seller_before = m.account(kSeller).gp;
  const auto rs = m.run_sink_day(policy(10), kDay);
  EXPECT_EQ(removed_units(rs), 2);
  EXPECT_EQ(m.coffer_balance(), 0);
  EXPECT_EQ(m.account(kSeller).gp, seller_before + 2000);
  EXPECT_EQ(m.external_flows().items_removed.at(kItem), 2);
  EXPECT_EQ(m.external_flows().sink_spent, 2000);
}

TEST(RunSinkDay, StopsWhenCofferCannotFundNextAsk) {
  Market m = market_with_coffer(2000);
  const auto rs = m.run_sink_day(policy(10), kDay);
  ASSERT_EQ(rs.size(), 1u);
  EXPECT_EQ(rs[0].price_paid, 1000);
  EXPECT_EQ(m.coffer_balance(), 1000);
}

TEST(RunSinkDay, InactiveBeforeStart) {
  Market m = market_with_coffer(1'000'000);
  EXPECT_TRUE(m.run_sink_day(policy(3), add_days(kDay, -1)).empty());
}

TEST(RunSinkDay, ActivePolicyNeedsTargets) {
  Market m = market_with_coffer(0);
  EXPECT_THROW(m.run_sink_day(SinkPolicy{{}, 1, kDay}, kDay), ExchangeError);
  EXPECT_THROW(m.run_sink_day(SinkPolicy{{ItemId{99}}, 1, kDay}, kDay), ExchangeError);
}
