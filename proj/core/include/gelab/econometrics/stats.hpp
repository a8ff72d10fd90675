#pragma once

namespace gelab::econometrics::stats {

double normal_cdf(double z);
/// Two-sided p-value of a standard normal statistic.
double normal_two_sided_p(double z);
/// z such that P(|Z| <= z) = level.
double normal_critical(double level);
/// Upper tail P(F > x) of an F(d1, d2) variable.
double f_upper_tail(double x, double d1, double d2);
/// Two-sided p-value of a variance-ratio statistic under F(d1, d2).
double f_two_sided_p(double x, double d1, double d2);

}  // namespace gelab::econometrics::stats
