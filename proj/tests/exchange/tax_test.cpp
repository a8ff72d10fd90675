#include <gtest/gtest.h>

#include <random>

#include "gelab/exchange/tax.hpp"
#include "gelab/exchange/types.hpp"

using namespace gelab;
using namespace gelab::exchange;

namespace {

// Straight transcription of the schedule: nothing under 100 GP, 1% floored, 5M cap.
Gp reference_tax(Gp price) {
  if (price < 100) return 0;
  return std::min<Gp>(price / 100, 5'000'000);
}

}  // namespace

TEST(ApplyTax, ExemptBelowFloor) {
  const TaxSchedule s;
  EXPECT_EQ(apply_tax(1, s), 0);
  EXPECT_EQ(apply_tax(50, s), 0);
  EXPECT_EQ(apply_tax(99, s), 0);
}

TEST(ApplyTax, FloorIsInclusive) {
  const TaxSchedule s;
  EXPECT_EQ(apply_tax(100, s), 1);
  EXPECT_EQ(apply_tax(101, s), 1);
  EXPECT_EQ(apply_tax(199, s), 1);
  EXPECT_EQ(apply_tax(200, s), 2);
}

TEST(ApplyTax, CapBoundaries) {
  const TaxSchedule s;
  EXPECT_EQ(apply_tax(499'999'999, s), 4'999'999);
  EXPECT_EQ(apply_tax(500'000'000, s), 5'000'000);
  EXPECT_EQ(apply_tax(1'000'000'000, s), 5'000'000);
  EXPECT_EQ(apply_tax(std::int64_t{1} << 60, s), 5'000'000);
  EXPECT_EQ(s.cap_threshold(), 500'000'000);
}

TEST(ApplyTax, MatchesReferenceOnRandomPrices) {
  const TaxSchedule s;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> digits(0, 12);
  for (int i = 0; i < 20000; ++i) {
    const Gp scale = static_cast<Gp>(std::pow(10.0, digits(rng)));
    const Gp price = 1 + static_cast<Gp>(rng() % static_cast<std::uint64_t>(scale));
    ASSERT_EQ(apply_tax(price, s), reference_tax(price)) << price;
  }
}

TEST(ApplyTax, MonotoneAndBounded) {
  const TaxSchedule s;
  std::mt19937_64 rng(11);
  for (int i = 0; i < 20000; ++i) {
    const Gp a = 1 + static_cast<Gp>(rng() % 2'000'000'000ULL);
    const Gp b = a + static_cast<Gp>(rng() % 1'000'000ULL);
    const Gp ta = apply_tax(a, s);
    const Gp tb = apply_tax(b, s);
    ASSERT_LE(ta, tb);
    ASSERT_LE(tb, s.cap);
    ASSERT_GE(ta, 0);
  }
}

TEST(ApplyTax, CustomRateUsesExactRational) {
  TaxSchedule s;
  s.rate_num = 3;
  s.rate_den = 200;
  s.exempt_below = 10;
  s.cap = 1'000;
  EXPECT_EQ(apply_tax(9, s), 0);
  EXPECT_EQ(apply_tax(100, s), 1);
  EXPECT_EQ(apply_tax(1000, s), 15);
  EXPECT_EQ(apply_tax(10'000'000, s), 1'000);
  EXPECT_EQ(apply_tax(std::int64_t{1} << 62, s), 1'000);
}

TEST(TaxSchedule, ValidateRejectsBadRates) {
  TaxSchedule s;
  s.rate_num = 0;
  EXPECT_THROW(s.validate(), ExchangeError);
  s.rate_num = 100;
  EXPECT_THROW(s.validate(), ExchangeError);
  s = TaxSchedule{};
  s.exempt_below = 600'000'000;
  EXPECT_THROW(s.validate(), ExchangeError);
  EXPECT_NO_THROW(TaxSchedule{}.validate());
}
