#include "gelab/exchange/tax.hpp"

#include <algorithm>
#include <string>

#include "gelab/exchange/types.hpp"

namespace gelab::exchange {

namespace {
__extension__ using Wide = __int128;
}  // namespace

void TaxSchedule::validate() const {
  if (rate_den <= 0 || rate_num <= 0 || rate_num >= rate_den) {
    throw ExchangeError(ExchangeErrc::InvalidPolicy, "tax rate must satisfy 0 < rate < 1",
                        {{"rate_num", std::to_string(rate_num)},
                         {"rate_den", std::to_string(rate_den)}});
  }
  if (exempt_below < 0 || cap <= 0) {
    throw ExchangeError(ExchangeErrc::InvalidPolicy, "tax floor and cap must be non-negative");
  }
  // exempt_below < cap / rate  <=>  exempt_below * num < cap * den
  if (static_cast<Wide>(exempt_below) * rate_num >= static_cast<Wide>(cap) * rate_den) {
    throw ExchangeError(ExchangeErrc::InvalidPolicy, "tax floor must lie below the cap threshold");
  }
}

Gp TaxSchedule::cap_threshold() const {
  const Wide num = static_cast<Wide>(cap) * rate_den;
  return static_cast<Gp>((num + rate_num - 1) / rate_num);
}

Gp apply_tax(Gp price, const TaxSchedule& schedule) {
  if (price < schedule.exempt_below) return 0;
  const Wide raw = static_cast<Wide>(price) * schedule.rate_num / schedule.rate_den;
  return static_cast<Gp>(std::min<Wide>(raw, schedule.cap));
}

}  // namespace gelab::exchange
