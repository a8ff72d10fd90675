#pragma once

#include <cstddef>
#include <vector>

#include "gelab/date.hpp"
#include "gelab/panel.hpp"

namespace gelab::econometrics {

enum class SeType { hc1, cluster_item };

/// Two numerically independent routes to the same fixed-effects estimate.
enum class DidMethod { within, dummies };

struct DidSpec {
  std::vector<ItemId> treated;
  std::vector<ItemId> control;
  Date implementation;
  DateWindow window;
  OutcomeVar outcome = OutcomeVar::price;
  SeType se = SeType::hc1;
  DidMethod method = DidMethod::within;
  double level = 0.95;
};

struct DidEstimate {
  double theta = 0.0;
  double se_theta = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double p_value = 1.0;
  double phi = 0.0;
  double se_phi = 0.0;
  /// Mean of the outcome in levels over the rows used.
  double outcome_mean = 0.0;
  double log_outcome_mean = 0.0;
  std::size_t n_obs = 0;
  std::size_t n_items = 0;
  std::size_t n_dropped_nonpositive = 0;
  DidSpec spec;
};

/// log(Y) = item FE + phi * Post + theta * Post x Treated + e, Post = date >= implementation.
DidEstimate did_estimate(const Panel& panel, const DidSpec& spec);

}  // namespace gelab::econometrics
