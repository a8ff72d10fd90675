#pragma once

#include <cstddef>
#include <optional>

#include "gelab/date.hpp"
#include "gelab/econometrics/local_poly.hpp"
#include "gelab/panel.hpp"

namespace gelab::econometrics {

/// Kink in log volume at the price where the per-unit tax hits its cap.
///
/// Prices enter the fit as x = price / price_unit. The tax measured in the same unit has
/// slope `tax_slope_below` under the kink and `tax_slope_above` over it, so
/// delta = (slope_above - slope_below) / (tax_slope_above - tax_slope_below).
struct RkSpec {
  double kink = 5e8;
  double lower = 1e8;
  /// Defaults to a window symmetric with the lower restriction.
  std::optional<double> upper;
  int order = 1;
  Kernel kernel = Kernel::triangular;
  DateWindow window;
  double price_unit = 1e6;
  double tax_slope_below = 0.01;
  double tax_slope_above = 0.0;
  double level = 0.95;
};

struct RkEstimate {
  double delta = 0.0;
  double se = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double p_value = 1.0;
  double slope_below = 0.0;
  double slope_above = 0.0;
  std::size_t n_below = 0;
  std::size_t n_above = 0;
  std::size_t n_dropped_zero_volume = 0;
  LocalPolyFit below;
  LocalPolyFit above;
  RkSpec spec;
};

RkEstimate rk_estimate(const Panel& panel, const RkSpec& spec);

}  // namespace gelab::econometrics
