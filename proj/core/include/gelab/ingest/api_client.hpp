#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gelab/date.hpp"
#include "gelab/ids.hpp"
#include "gelab/ingest/errors.hpp"
#include "gelab/panel.hpp"

namespace gelab::ingest {

inline constexpr const char* kDefaultBaseUrl = "https://prices.runescape.wiki/api/v1/osrs";

struct ApiConfig {
  /// Scheme, host, optional port and path prefix, e.g. "http://127.0.0.1:8080/api/v1/osrs".
  std::string base_url = kDefaultBaseUrl;
  /// Sent on every request; the public API rejects anonymous clients.
  std::string user_agent;
  std::chrono::milliseconds min_interval{1000};
  /// Responses are cached here when non-empty.
  std::filesystem::path cache_dir;
  /// Retries after a 429/503 that carries Retry-After.
  int max_retries = 3;

  /// Throws IngestError(InvalidConfig).
  void validate() const;
};

struct HttpResponse {
  int status = 0;
  std::string body;
  std::optional<double> retry_after_seconds;
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  /// `target` is the path plus query appended to the base URL's path prefix.
  virtual HttpResponse get(const std::string& base_url, const std::string& target,
                           const std::string& user_agent) = 0;
};

/// cpp-httplib backed transport (http and https).
std::shared_ptr<HttpTransport> make_default_transport();

/// Parses a `/timeseries` payload. Canonical price is the average instant-sell price
/// (avgLowPrice); canonical volume is highPriceVolume + lowPriceVolume. Records without an
/// instant-sell price are skipped, so missing days stay absent. Record dates are the UTC day
/// of `timestamp`.
std::vector<PanelObservation> parse_timeseries(const std::string& body, ItemId item);

/// Client for the time-series endpoint. One instance owns the rate limit: consecutive network
/// requests are at least `min_interval` apart. Not thread-safe.
class ApiClient {
 public:
  explicit ApiClient(ApiConfig config, std::shared_ptr<HttpTransport> transport = nullptr);

  /// Daily (`step` "24h") or finer series for one item restricted to `range`.
  /// Cached on disk keyed by (item, step, range).
  std::vector<PanelObservation> fetch_timeseries(ItemId item, const std::string& step = "24h",
                                                 DateWindow range = {});

  const ApiConfig& config() const { return config_; }
  std::int64_t network_requests() const { return network_requests_; }
  std::int64_t cache_hits() const { return cache_hits_; }

 private:
  HttpResponse request(const std::string& target);
  std::string cache_key(ItemId item, const std::string& step, const DateWindow& range) const;
  std::optional<std::string> cache_read(const std::string& key) const;
  void cache_write(const std::string& key, const std::string& body) const;

  ApiConfig config_;
  std::shared_ptr<HttpTransport> transport_;
  std::optional<std::chrono::steady_clock::time_point> last_request_;
  std::int64_t network_requests_ = 0;
  std::int64_t cache_hits_ = 0;
};

/// Convenience wrapper constructing a one-shot client.
std::vector<PanelObservation> fetch_timeseries(const ApiConfig& config, ItemId item,
                                               const std::string& step = "24h");

}  // namespace gelab::ingest
