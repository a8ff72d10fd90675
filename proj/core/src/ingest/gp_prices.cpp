#include "gelab/ingest/gp_prices.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "gelab/csv.hpp"
#include "gelab/ingest/errors.hpp"

namespace gelab::ingest {

namespace {

[[noreturn]] void schema_error(const std::string& source, std::size_t line, const std::string& field,
                               const std::string& message) {
  throw IngestError(IngestErrc::SchemaError, source + ":" + std::to_string(line) + ": " + message,
                    {{"path", source}, {"row", std::to_string(line)}, {"field", field}});
}

SourceSummary summarize_source(const std::string& name, bool official, const std::vector<double>& v) {
  SourceSummary s{name, official, v.size(), 0.0, v.front(), v.front()};
  double sum = 0.0;
  for (double x : v) {
    sum += x;
    s.min = std::min(s.min, x);
    s.max = std::max(s.max, x);
  }
  s.mean = sum / static_cast<double>(v.size());
  return s;
}

}  // namespace

std::vector<GpPricePoint> parse_gp_price_csv(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line)) schema_error(source, 1, "header", "empty file; expected header date,source,usd_per_million");
  const std::vector<std::string_view> expect{"date", "source", "usd_per_million"};
  if (split_csv_line(line) != expect) schema_error(source, 1, "header", "header must be date,source,usd_per_million");
  std::vector<GpPricePoint> out;
  std::set<std::pair<Date, std::string>> seen;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != 3) schema_error(source, lineno, "row", "expected 3 fields, found " + std::to_string(f.size()));
    const auto date = try_parse_date(f[0]);
    if (!date) schema_error(source, lineno, "date", "cannot parse date '" + std::string(f[0]) + "'");
    if (f[1].empty()) schema_error(source, lineno, "source", "empty source");
    double v = 0.0;
    const auto* end = f[2].data() + f[2].size();
    const auto [ptr, ec] = std::from_chars(f[2].data(), end, v);
    if (f[2].empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
      schema_error(source, lineno, "usd_per_million", "cannot parse usd_per_million '" + std::string(f[2]) + "'");
    }
    if (v <= 0.0) schema_error(source, lineno, "usd_per_million", "usd_per_million must be positive");
    if (!seen.emplace(*date, std::string(f[1])).second) {
      schema_error(source, lineno, "source", "duplicate (date, source) pair");
    }
    out.push_back({*date, std::string(f[1]), v});
  }
  if (out.empty()) throw IngestError(IngestErrc::EmptySeries, source + ": no data rows", {{"path", source}});
  return out;
}

std::vector<GpPricePoint> load_gp_price_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError(IngestErrc::IoError, "cannot open " + path.string(), {{"path", path.string()}});
  return parse_gp_price_csv(in, path.string());
}

GpPriceSummary summarize_gp_prices(const std::vector<GpPricePoint>& official,
                                   const std::vector<GpPricePoint>& illicit) {
  GpPriceSummary s;
  std::map<std::string, std::vector<double>> off_by, ill_by;
  for (const auto& p : official) off_by[p.source].push_back(p.usd_per_million);
  for (const auto& p : illicit) ill_by[p.source].push_back(p.usd_per_million);
  for (const auto& [name, v] : off_by) s.sources.push_back(summarize_source(name, true, v));
  for (const auto& [name, v] : ill_by) s.sources.push_back(summarize_source(name, false, v));

  auto mean_of = [](const std::vector<GpPricePoint>& pts) {
    double sum = 0.0;
    for (const auto& p : pts) sum += p.usd_per_million;
    return sum / static_cast<double>(pts.size());
  };
  if (!official.empty()) s.official_mean = mean_of(official);
  if (!illicit.empty()) {
    s.illicit_mean = mean_of(illicit);
    const auto [lo, hi] = std::minmax_element(illicit.begin(), illicit.end(), [](const auto& a, const auto& b) {
      return a.usd_per_million < b.usd_per_million;
    });
    s.illicit_min = lo->usd_per_million;
    s.illicit_max = hi->usd_per_million;
  }

  std::map<Date, std::vector<double>> off_day, ill_day;
  for (const auto& p : official) off_day[p.date].push_back(p.usd_per_million);
  for (const auto& p : illicit) ill_day[p.date].push_back(p.usd_per_million);
  for (const auto& [date, ov] : off_day) {
    const auto it = ill_day.find(date);
    if (it == ill_day.end()) continue;
    double o = 0.0, m = 0.0;
    for (double x : ov) o += x;
    for (double x : it->second) m += x;
    o /= static_cast<double>(ov.size());
    m /= static_cast<double>(it->second.size());
    s.premium.push_back({date, o, m, o - m});
  }
  s.premium_undefined = s.premium.empty();
  return s;
}

GpPriceData load_gp_prices(const std::optional<std::filesystem::path>& official_path,
                           const std::optional<std::filesystem::path>& sellers_path) {
  if (!official_path && !sellers_path) {
    throw IngestError(IngestErrc::EmptySeries, "no GP price file given", {{"path", ""}});
  }
  GpPriceData data;
  if (official_path) data.official = load_gp_price_csv(*official_path);
  if (sellers_path) data.illicit = load_gp_price_csv(*sellers_path);
  data.summary = summarize_gp_prices(data.official, data.illicit);
  return data;
}

std::vector<econometrics::SeriesPoint> gp_series(const GpPriceData& data, const std::string& source) {
  std::map<Date, std::pair<double, int>> acc;
  auto add = [&](const std::vector<GpPricePoint>& pts, bool any) {
    for (const auto& p : pts) {
      if (!any && p.source != source) continue;
      auto& a = acc[p.date];
      a.first += p.usd_per_million;
      ++a.second;
    }
  };
  if (source == "illicit_mean") {
    add(data.illicit, true);
  } else {
    add(data.official, false);
    add(data.illicit, false);
  }
  std::vector<econometrics::SeriesPoint> out;
  for (const auto& [d, a] : acc) out.push_back({d, a.first / a.second});
  return out;
}

}  // namespace gelab::ingest
