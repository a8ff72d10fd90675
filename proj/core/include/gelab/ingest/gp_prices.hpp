#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gelab/date.hpp"
#include "gelab/econometrics/break_test.hpp"

namespace gelab::ingest {

/// US dollars per million GP from one source on one date.
struct GpPricePoint {
  Date date;
  std::string source;
  double usd_per_million = 0.0;
};

struct SourceSummary {
  std::string source;
  bool official = false;
  std::size_t n = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Official minus the mean illicit price on one date.
struct PremiumPoint {
  Date date;
  double official = 0.0;
  double illicit_mean = 0.0;
  double premium = 0.0;
};

struct GpPriceSummary {
  std::vector<SourceSummary> sources;
  std::optional<double> official_mean;
  /// Mean over every illicit observation.
  std::optional<double> illicit_mean;
  std::optional<double> illicit_min;
  std::optional<double> illicit_max;
  std::vector<PremiumPoint> premium;
  /// Set when either side is absent, or no date carries both.
  bool premium_undefined = true;
};

struct GpPriceData {
  std::vector<GpPricePoint> official;
  std::vector<GpPricePoint> illicit;
  GpPriceSummary summary;
};

/// Reads `date,source,usd_per_million`; SchemaError names the line and field, including
/// duplicate (date, source) pairs and non-positive prices. EmptySeries when no data rows.
std::vector<GpPricePoint> parse_gp_price_csv(std::istream& in, const std::string& source = "<stream>");
std::vector<GpPricePoint> load_gp_price_csv(const std::filesystem::path& path);

GpPriceSummary summarize_gp_prices(const std::vector<GpPricePoint>& official,
                                   const std::vector<GpPricePoint>& illicit);

/// Either path may be absent (not both); every row of the official file counts as official.
GpPriceData load_gp_prices(const std::optional<std::filesystem::path>& official_path,
                           const std::optional<std::filesystem::path>& sellers_path);

/// Date-ordered values of one source, or of the per-date illicit mean when `source` is
/// "illicit_mean", ready for break testing.
std::vector<econometrics::SeriesPoint> gp_series(const GpPriceData& data, const std::string& source);

}  // namespace gelab::ingest
