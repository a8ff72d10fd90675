#include "gelab/econometrics/local_poly.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "gelab/econometrics/errors.hpp"

namespace gelab::econometrics {

double kernel_weight(Kernel kernel, double u) {
  const double a = std::fabs(u);
  if (a > 1.0) return 0.0;
  switch (kernel) {
    case Kernel::triangular: return 1.0 - a;
    case Kernel::uniform: return 0.5;
    case Kernel::epanechnikov: return 0.75 * (1.0 - a * a);
  }
  return 0.0;
}

double LocalPolyFit::predict(double x) const {
  const double d = x - center;
  double acc = 0.0;
  for (int j = order; j >= 0; --j) acc = acc * d + coefficients(j);
  return acc;
}

LocalPolyFit local_poly_fit(std::span<const WeightedPoint> points, const LocalPolyOptions& opt) {
  if (!(opt.bandwidth > 0.0) || !std::isfinite(opt.bandwidth) || opt.order < 0 || opt.order > 8) {
    throw EstimationError(EstimationErrc::InvalidSpec, "bandwidth must be positive and order in [0, 8]");
  }
  const int p = opt.order + 1;

  // Fit on u = (x - c) / h so the design stays well conditioned, then rescale.
  std::vector<double> us;
  std::vector<double> ys;
  std::vector<double> ws;
  for (const auto& pt : points) {
    if (opt.side == FitSide::left && !(pt.x < opt.center)) continue;
    if (opt.side == FitSide::right && !(pt.x >= opt.center)) continue;
    const double u = (pt.x - opt.center) / opt.bandwidth;
    const double w = pt.weight * kernel_weight(opt.kernel, u);
    if (!(w > 0.0) || !std::isfinite(w) || !std::isfinite(pt.y)) continue;
    us.push_back(u);
    ys.push_back(pt.y);
    ws.push_back(w);
  }
  const auto n = static_cast<Eigen::Index>(us.size());
  if (n < p + 1) {
    throw EstimationError(EstimationErrc::InsufficientSupport,
                          "not enough points with positive kernel weight",
                          {{"n", std::to_string(n)}, {"required", std::to_string(p + 1)}});
  }

  Eigen::MatrixXd z(n, p);
  Eigen::VectorXd y(n);
  Eigen::VectorXd w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double pw = 1.0;
    for (int j = 0; j < p; ++j) {
      z(i, j) = pw;
      pw *= us[i];
    }
    y(i) = ys[i];
    w(i) = ws[i];
  }
  const Eigen::VectorXd sw = w.cwiseSqrt();
  const Eigen::MatrixXd a = sw.asDiagonal() * z;
  const Eigen::VectorXd b = sw.cwiseProduct(y);

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < p) {
    throw EstimationError(EstimationErrc::RankDeficient, "design matrix is rank deficient",
                          {{"rank", std::to_string(qr.rank())}, {"columns", std::to_string(p)}});
  }
  const Eigen::VectorXd gamma = qr.solve(b);

  // (A'A)^-1 = P R^-1 R^-T P'
  const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  const auto perm = qr.colsPermutation();
  const Eigen::MatrixXd bread = perm * (r_inv * r_inv.transpose()) * perm.transpose();

  const Eigen::VectorXd resid = y - z * gamma;
  const Eigen::VectorXd score_scale = w.cwiseProduct(resid);
  const Eigen::MatrixXd zs = score_scale.asDiagonal() * z;
  const Eigen::MatrixXd meat = zs.transpose() * zs;
  const double hc1 = static_cast<double>(n) / static_cast<double>(n - p);
  const Eigen::MatrixXd cov_u = hc1 * bread * meat * bread;

  LocalPolyFit fit;
  fit.center = opt.center;
  fit.bandwidth = opt.bandwidth;
  fit.order = opt.order;
  fit.n_used = static_cast<std::size_t>(n);
  Eigen::VectorXd scale(p);
  for (int j = 0; j < p; ++j) scale(j) = std::pow(opt.bandwidth, -j);
  fit.coefficients = gamma.cwiseProduct(scale);
  fit.covariance = scale.asDiagonal() * cov_u * scale.asDiagonal();
  return fit;
}

}  // namespace gelab::econometrics
