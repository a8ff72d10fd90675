#include "gelab/econometrics/rd.hpp"

#include <cmath>
#include <vector>

#include "gelab/econometrics/errors.hpp"
#include "gelab/econometrics/stats.hpp"

namespace gelab::econometrics {

namespace {

LocalPolyFit fit_side(std::span<const WeightedPoint> pts, const RdSpec& spec, FitSide side,
                      const char* name) {
  try {
    return local_poly_fit(pts, LocalPolyOptions{spec.cutoff, spec.bandwidth, spec.order, spec.kernel, side});
  } catch (const EstimationError& e) {
    auto details = e.details();
    details.emplace_back("side", name);
    throw EstimationError(e.kind(), std::string(e.what()) + " (" + name + " of cutoff)", details);
  }
}

}  // namespace

RdEstimate rd_estimate(const Panel& panel, const RdSpec& spec) {
  if (!(spec.bandwidth > 0.0) || !(spec.level > 0.0 && spec.level < 1.0)) {
    throw EstimationError(EstimationErrc::InvalidSpec, "RD bandwidth must be positive and level in (0, 1)");
  }
  RdEstimate est;
  est.spec = spec;
  std::vector<WeightedPoint> pts;
  for (const auto& o : panel.observations()) {
    if (!spec.window.contains(o.date)) continue;
    if (std::fabs(o.price - spec.cutoff) > spec.bandwidth) continue;
    if (!(o.volume > 0.0)) {
      ++est.n_dropped_zero_volume;
      continue;
    }
    pts.push_back({o.price, std::log(o.volume), 1.0});
  }
  est.left = fit_side(pts, spec, FitSide::left, "left");
  est.right = fit_side(pts, spec, FitSide::right, "right");
  est.n_left = est.left.n_used;
  est.n_right = est.right.n_used;
  est.beta = est.right.intercept() - est.left.intercept();
  est.se = std::sqrt(est.right.variance(0) + est.left.variance(0));
  const double z = stats::normal_critical(spec.level);
  est.ci_low = est.beta - z * est.se;
  est.ci_high = est.beta + z * est.se;
  est.p_value = est.se > 0.0 ? stats::normal_two_sided_p(est.beta / est.se) : (est.beta == 0.0 ? 1.0 : 0.0);
  return est;
}

}  // namespace gelab::econometrics
