#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

namespace gelab::econometrics {

enum class Kernel { triangular, uniform, epanechnikov };

/// Which side of the center a fit uses: left is x < center, right is x >= center.
enum class FitSide { left, right, both };

struct WeightedPoint {
  double x = 0.0;
  double y = 0.0;
  double weight = 1.0;
};

struct LocalPolyOptions {
  double center = 0.0;
  double bandwidth = 1.0;
  int order = 1;
  Kernel kernel = Kernel::triangular;
  FitSide side = FitSide::both;
};

/// Kernel weight at scaled distance u = (x - center) / bandwidth; zero outside [-1, 1].
double kernel_weight(Kernel kernel, double u);

/// Coefficients of y on (x - center)^j, j = 0..order, with HC1 sandwich covariance.
struct LocalPolyFit {
  Eigen::VectorXd coefficients;
  Eigen::MatrixXd covariance;
  std::size_t n_used = 0;
  double center = 0.0;
  double bandwidth = 0.0;
  int order = 0;

  double intercept() const { return coefficients(0); }
  double slope() const { return coefficients(1); }
  double variance(int j) const { return covariance(j, j); }
  /// Fitted value at x.
  double predict(double x) const;
};

/// Kernel-weighted least squares; each point's weight is multiplied by its kernel weight and
/// only points with positive product are used.
///
/// Throws EstimationError(InsufficientSupport) with fewer than order + 2 such points and
/// EstimationError(RankDeficient) when the design has fewer distinct x values than coefficients.
LocalPolyFit local_poly_fit(std::span<const WeightedPoint> points, const LocalPolyOptions& options);

}  // namespace gelab::econometrics
