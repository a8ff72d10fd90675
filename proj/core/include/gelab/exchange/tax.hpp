#pragma once

#include <cstdint>

#include "gelab/ids.hpp"

namespace gelab::exchange {

/// Seller-side transaction tax: a flat rate above an exemption floor, capped per unit.
struct TaxSchedule {
  /// Prices strictly below this pay nothing; a sale at exactly this price is taxed.
  Gp exempt_below = 100;
  std::int64_t rate_num = 1;
  std::int64_t rate_den = 100;
  Gp cap = 5'000'000;

  /// Throws ExchangeError(InvalidPolicy) unless 0 < rate < 1 and exempt_below < cap / rate.
  void validate() const;

  /// Smallest price at which the cap binds.
  Gp cap_threshold() const;
};

/// Per-unit tax on a sale at `price`: 0 below the floor, else min(floor(rate * price), cap).
Gp apply_tax(Gp price, const TaxSchedule& schedule);

}  // namespace gelab::exchange
