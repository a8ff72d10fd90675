#include <gtest/gtest.h>

#include <map>
#include <random>
#include <sstream>

#include "gelab/exchange/summary.hpp"

using namespace gelab;
using namespace gelab::exchange;

namespace {

Trade trade(std::int64_t item, Gp price, std::int64_t qty, Date d, std::uint64_t seq = 0) {
  Trade t;
  t.item = ItemId{item};
  t.price = price;
  t.quantity = qty;
  t.date = d;
  t.seq = seq;
  return t;
}

const Date kDay = make_date(2021, 12, 9);

}  // namespace

TEST(DailySummary, VolumeWeightedMean) {
  const std::vector<Trade> log{trade(1, 100, 1, kDay), trade(1, 200, 3, kDay)};
  const auto obs = daily_summary(log, kDay);
  ASSERT_EQ(obs.size(), 1u);
  EXPECT_DOUBLE_EQ(obs[0].price, 175.0);
  EXPECT_DOUBLE_EQ(obs[0].volume, 4.0);
  EXPECT_EQ(obs[0].date, kDay);
}

TEST(DailySummary, ItemsWithoutTradesAreAbsent) {
  const std::vector<Trade> log{trade(2, 100, 1, kDay), trade(3, 50, 1, add_days(kDay, 1))};
  const auto obs = daily_summary(log, kDay);
  ASSERT_EQ(obs.size(), 1u);
  EXPECT_EQ(obs[0].item, ItemId{2});
  EXPECT_TRUE(daily_summary(log, add_days(kDay, 5)).empty());
}

TEST(DailySummary, MatchesBruteForceAggregation) {
  std::mt19937_64 rng(2021);
  std::vector<Trade> log;
  for (int i = 0; i < 1000; ++i) {
    log.push_back(trade(1 + static_cast<std::int64_t>(rng() % 15), 1 + static_cast<Gp>(rng() % 10'000'000),
                        1 + static_cast<std::int64_t>(rng() % 50), add_days(kDay, static_cast<int>(rng() % 3)),
                        static_cast<std::uint64_t>(i)));
  }
  for (int d = 0; d < 3; ++d) {
    const Date date = add_days(kDay, d);
    std::map<std::int64_t, std::pair<long double, long double>> acc;
    for (const Trade& t : log) {
      if (t.date != date) continue;
      auto& [pv, v] = acc[t.item.value];
      pv += static_cast<long double>(t.price) * t.quantity;
      v += t.quantity;
    }
    const auto obs = daily_summary(log, date);
    ASSERT_EQ(obs.size(), acc.size());
    std::size_t k = 0;
    for (const auto& [item, pv_v] : acc) {
      EXPECT_EQ(obs[k].item.value, item);
      EXPECT_NEAR(obs[k].price, static_cast<double>(pv_v.first / pv_v.second), 1e-9 * obs[k].price);
      EXPECT_DOUBLE_EQ(obs[k].volume, static_cast<double>(pv_v.second));
      ++k;
    }
  }
}

TEST(TradeLogCsv, Header) {
  std::ostringstream os;
  Trade t = trade(4, 110, 2, kDay, 9);
  t.buyer = PlayerId{1};
  t.seller = PlayerId{2};
  t.buyer_refund = 20;
  t.tax_paid = 2;
  const std::vector<Trade> log{t};
  write_trade_log_csv(os, log);
  EXPECT_EQ(os.str(), "date,seq,item_id,qty,price,buyer_id,seller_id,refund,tax\n2021-12-09,9,4,2,110,1,2,20,2\n");
  std::ostringstream rs;
  const std::vector<Removal> removals{Removal{kDay, ItemId{4}, 3, 1000, PlayerId{2}}};
  write_removal_log_csv(rs, removals);
  EXPECT_EQ(rs.str(), "date,item_id,qty,price_paid\n2021-12-09,4,3,1000\n");
}
