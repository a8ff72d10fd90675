#pragma once

#include <cstddef>

#include "gelab/date.hpp"
#include "gelab/econometrics/local_poly.hpp"
#include "gelab/panel.hpp"

namespace gelab::econometrics {

/// Sharp discontinuity in log volume at a price cutoff. Running variable is the panel price.
struct RdSpec {
  double cutoff = 100.0;
  double bandwidth = 20.0;
  int order = 1;
  Kernel kernel = Kernel::triangular;
  DateWindow window;
  double level = 0.95;
};

struct RdEstimate {
  double beta = 0.0;
  double se = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double p_value = 1.0;
  std::size_t n_left = 0;
  std::size_t n_right = 0;
  std::size_t n_dropped_zero_volume = 0;
  LocalPolyFit left;
  LocalPolyFit right;
  RdSpec spec;
};

/// beta = right intercept - left intercept at the cutoff, SE from the two independent fits.
RdEstimate rd_estimate(const Panel& panel, const RdSpec& spec);

}  // namespace gelab::econometrics
