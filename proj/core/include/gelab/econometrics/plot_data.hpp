#pragma once

#include <cstddef>
#include <vector>

#include "gelab/econometrics/did.hpp"
#include "gelab/econometrics/rd.hpp"
#include "gelab/econometrics/rk.hpp"
#include "gelab/panel.hpp"

namespace gelab::econometrics {

struct XY {
  double x = 0.0;
  double y = 0.0;
};

struct BinnedMean {
  double x = 0.0;
  double mean = 0.0;
  std::size_t n = 0;
};

/// Binned outcome means plus the two fitted polynomials, for discontinuity and kink plots.
/// x is in the estimator's running-variable units (GP for RD, price_unit for RK).
struct DesignPlotData {
  double threshold = 0.0;
  std::vector<BinnedMean> bins;
  std::vector<XY> fit_left;
  std::vector<XY> fit_right;
};

DesignPlotData rd_plot_data(const Panel& panel, const RdEstimate& est, int bins_per_side = 20);
DesignPlotData rk_plot_data(const Panel& panel, const RkEstimate& est, int bins_per_side = 20);

struct WeeklyLine {
  int week = 0;
  double treated = 0.0;
  double control = 0.0;
  bool has_treated = false;
  bool has_control = false;
};

/// Weekly group means of the log outcome around the implementation date, the treated
/// counterfactual (observed minus theta) for post weeks, and the effect with its CI.
struct DidPlotData {
  std::vector<WeeklyLine> weekly;
  std::vector<XY> counterfactual;
  double theta = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

DidPlotData did_plot_data(const Panel& panel, const DidEstimate& est);

}  // namespace gelab::econometrics
