#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gelab/econometrics/did.hpp"

namespace gelab::econometrics::detail {

/// y = group FE + x b + e, rows tagged with a dense group index in [0, n_groups).
struct FeDesign {
  std::vector<int> group;
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  int n_groups = 0;
};

struct FeFit {
  Eigen::VectorXd coef;
  Eigen::MatrixXd cov;
};

/// Within transformation (demeaning by group).
FeFit fe_within(const FeDesign& design, SeType se);
/// Explicit group dummies in a single least-squares solve.
FeFit fe_dummies(const FeDesign& design, SeType se);

}  // namespace gelab::econometrics::detail
