#include "fe_ols.hpp"

#include <string>

#include "gelab/econometrics/errors.hpp"

namespace gelab::econometrics::detail {

namespace {

Eigen::MatrixXd inverse_gram(const Eigen::ColPivHouseholderQR<Eigen::MatrixXd>& qr, Eigen::Index p) {
  const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inv =
      r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  const auto perm = qr.colsPermutation();
  return perm * (r_inv * r_inv.transpose()) * perm.transpose();
}

/// Sandwich covariance from the coefficient-influence matrix S (n x k) and residuals.
Eigen::MatrixXd sandwich(const Eigen::MatrixXd& s, const Eigen::VectorXd& resid,
                         const std::vector<int>& group, int n_groups, SeType se) {
  const auto n = s.rows();
  const auto k = s.cols();
  if (se == SeType::hc1) {
    const double dof = static_cast<double>(n - k - n_groups);
    if (dof <= 0) {
      throw EstimationError(EstimationErrc::InsufficientSupport, "no residual degrees of freedom");
    }
    const Eigen::MatrixXd se_rows = resid.asDiagonal() * s;
    return (se_rows.transpose() * se_rows) * (static_cast<double>(n) / dof);
  }
  if (n_groups < 2 || n - k <= 0) {
    throw EstimationError(EstimationErrc::InsufficientSupport, "clustered SEs need at least two clusters");
  }
  Eigen::MatrixXd scores = Eigen::MatrixXd::Zero(n_groups, k);
  for (Eigen::Index i = 0; i < n; ++i) scores.row(group[i]) += resid(i) * s.row(i);
  const double g = n_groups;
  const double factor = g / (g - 1.0) * static_cast<double>(n - 1) / static_cast<double>(n - k);
  return (scores.transpose() * scores) * factor;
}

void check_rank(const Eigen::ColPivHouseholderQR<Eigen::MatrixXd>& qr, Eigen::Index p) {
  if (qr.rank() < p) {
    throw EstimationError(EstimationErrc::RankDeficient,
                          "regressors are collinear with the item fixed effects",
                          {{"rank", std::to_string(qr.rank())}, {"columns", std::to_string(p)}});
  }
}

}  // namespace

FeFit fe_within(const FeDesign& d, SeType se) {
  const auto n = d.x.rows();
  const auto k = d.x.cols();
  Eigen::MatrixXd xm = Eigen::MatrixXd::Zero(d.n_groups, k);
  Eigen::VectorXd ym = Eigen::VectorXd::Zero(d.n_groups);
  Eigen::VectorXd cnt = Eigen::VectorXd::Zero(d.n_groups);
  for (Eigen::Index i = 0; i < n; ++i) {
    xm.row(d.group[i]) += d.x.row(i);
    ym(d.group[i]) += d.y(i);
    cnt(d.group[i]) += 1.0;
  }
  for (int g = 0; g < d.n_groups; ++g) {
    if (cnt(g) > 0) {
      xm.row(g) /= cnt(g);
      ym(g) /= cnt(g);
    }
  }
  Eigen::MatrixXd xt(n, k);
  Eigen::VectorXd yt(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    xt.row(i) = d.x.row(i) - xm.row(d.group[i]);
    yt(i) = d.y(i) - ym(d.group[i]);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xt);
  check_rank(qr, k);
  FeFit fit;
  fit.coef = qr.solve(yt);
  const Eigen::VectorXd resid = yt - xt * fit.coef;
  const Eigen::MatrixXd s = xt * inverse_gram(qr, k);
  fit.cov = sandwich(s, resid, d.group, d.n_groups, se);
  return fit;
}

FeFit fe_dummies(const FeDesign& d, SeType se) {
  const auto n = d.x.rows();
  const auto k = d.x.cols();
  const auto p = k + d.n_groups;
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(n, p);
  full.leftCols(k) = d.x;
  for (Eigen::Index i = 0; i < n; ++i) full(i, k + d.group[i]) = 1.0;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(full);
  check_rank(qr, p);
  const Eigen::VectorXd beta = qr.solve(d.y);
  const Eigen::VectorXd resid = d.y - full * beta;
  const Eigen::MatrixXd s = full * inverse_gram(qr, p).leftCols(k);
  FeFit fit;
  fit.coef = beta.head(k);
  fit.cov = sandwich(s, resid, d.group, d.n_groups, se);
  return fit;
}

}  // namespace gelab::econometrics::detail
