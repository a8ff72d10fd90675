#include "gelab/econometrics/rk.hpp"

#include <cmath>
#include <vector>

#include "gelab/econometrics/errors.hpp"
#include "gelab/econometrics/stats.hpp"

namespace gelab::econometrics {

RkEstimate rk_estimate(const Panel& panel, const RkSpec& spec) {
  const double upper = spec.upper.value_or(spec.kink + (spec.kink - spec.lower));
  if (!(spec.kink > spec.lower) || !(upper > spec.kink) || !(spec.price_unit > 0.0) ||
      spec.order < 1 || spec.tax_slope_below == spec.tax_slope_above ||
      !(spec.level > 0.0 && spec.level < 1.0)) {
    throw EstimationError(EstimationErrc::InvalidSpec,
                          "RK needs lower < kink < upper, order >= 1 and a kink in the tax slope");
  }
  RkEstimate est;
  est.spec = spec;
  est.spec.upper = upper;

  std::vector<WeightedPoint> pts;
  for (const auto& o : panel.observations()) {
    if (!spec.window.contains(o.date)) continue;
    if (!(o.price > spec.lower) || o.price > upper) continue;
    if (!(o.volume > 0.0)) {
      ++est.n_dropped_zero_volume;
      continue;
    }
    pts.push_back({o.price / spec.price_unit, std::log(o.volume), 1.0});
  }

  const double center = spec.kink / spec.price_unit;
  auto fit = [&](FitSide side, double bandwidth, const char* name) {
    try {
      return local_poly_fit(pts, LocalPolyOptions{center, bandwidth, spec.order, spec.kernel, side});
    } catch (const EstimationError& e) {
      auto details = e.details();
      details.emplace_back("side", name);
      throw EstimationError(e.kind(), std::string(e.what()) + " (" + name + " kink)", details);
    }
  };
  est.below = fit(FitSide::left, (spec.kink - spec.lower) / spec.price_unit, "below");
  est.above = fit(FitSide::right, (upper - spec.kink) / spec.price_unit, "above");
  est.n_below = est.below.n_used;
  est.n_above = est.above.n_used;
  est.slope_below = est.below.slope();
  est.slope_above = est.above.slope();

  const double tax_kink = spec.tax_slope_above - spec.tax_slope_below;
  est.delta = (est.slope_above - est.slope_below) / tax_kink;
  est.se = std::sqrt(est.above.variance(1) + est.below.variance(1)) / std::fabs(tax_kink);
  const double z = stats::normal_critical(spec.level);
  est.ci_low = est.delta - z * est.se;
  est.ci_high = est.delta + z * est.se;
  est.p_value = est.se > 0.0 ? stats::normal_two_sided_p(est.delta / est.se) : (est.delta == 0.0 ? 1.0 : 0.0);
  return est;
}

}  // namespace gelab::econometrics
