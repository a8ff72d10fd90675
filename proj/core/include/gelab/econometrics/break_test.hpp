#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gelab/date.hpp"

namespace gelab::econometrics {

struct SeriesPoint {
  Date date;
  double value = 0.0;
};

enum class BreakMode { known_date, scan };

struct BreakTestOptions {
  /// Known-date mode when set; otherwise scan the interior of the sample.
  std::optional<Date> known_date;
  /// Fraction trimmed from each end in scan mode (0.15 leaves the interior 70%).
  double trim = 0.15;
  double level = 0.05;
  std::string series_id;
};

/// Chow-type F test for a mean shift plus an F variance-ratio test, both at the same split.
///
/// Scan mode takes the supremum over candidate splits and Bonferroni-adjusts each test by the
/// number of candidates. The two tests are combined by Bonferroni as well, so
/// `break_detected` is `combined_p < level`.
struct BreakTestResult {
  std::string series_id;
  BreakMode mode = BreakMode::known_date;
  std::size_t n = 0;
  std::size_t n_candidates = 0;
  /// Known date, or the candidate with the largest mean-shift statistic.
  Date break_date;
  Date variance_break_date;
  double mean_stat = 0.0;
  double mean_p = 1.0;
  double variance_stat = 1.0;
  double variance_p = 1.0;
  double combined_p = 1.0;
  bool mean_break = false;
  bool variance_break = false;
  bool break_detected = false;
  double level = 0.05;
};

BreakTestResult break_test(std::span<const SeriesPoint> series, const BreakTestOptions& options);

}  // namespace gelab::econometrics
