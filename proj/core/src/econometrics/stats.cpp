#include "gelab/econometrics/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>

namespace gelab::econometrics::stats {

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_two_sided_p(double z) {
  if (std::isnan(z)) return 1.0;
  return std::erfc(std::fabs(z) / std::sqrt(2.0));
}

double normal_critical(double level) {
  const boost::math::normal_distribution<double> n;
  return boost::math::quantile(n, 0.5 + level / 2.0);
}

double f_upper_tail(double x, double d1, double d2) {
  if (std::isnan(x)) return 1.0;
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  const boost::math::fisher_f_distribution<double> f(d1, d2);
  return boost::math::cdf(boost::math::complement(f, x));
}

double f_two_sided_p(double x, double d1, double d2) {
  if (std::isnan(x)) return 1.0;
  if (x <= 0.0 || std::isinf(x)) return 0.0;
  const boost::math::fisher_f_distribution<double> f(d1, d2);
  const double lower = boost::math::cdf(f, x);
  const double upper = boost::math::cdf(boost::math::complement(f, x));
  return std::min(1.0, 2.0 * std::min(lower, upper));
}

}  // namespace gelab::econometrics::stats
