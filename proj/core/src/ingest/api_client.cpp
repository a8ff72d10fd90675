#include "gelab/ingest/api_client.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace gelab::ingest {

using nlohmann::json;

namespace {

struct SplitUrl {
  std::string origin;
  std::string prefix;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme = url.find("://");
  const auto path = url.find('/', scheme == std::string::npos ? 0 : scheme + 3);
  if (path == std::string::npos) return {url, ""};
  std::string prefix = url.substr(path);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  return {url.substr(0, path), prefix};
}

class HttplibTransport : public HttpTransport {
 public:
  HttpResponse get(const std::string& base_url, const std::string& target,
                   const std::string& user_agent) override {
    const auto url = split_url(base_url);
    httplib::Client client(url.origin);
    client.set_connection_timeout(10);
    client.set_read_timeout(30);
    client.set_follow_location(true);
    auto res = client.Get(url.prefix + target, {{"User-Agent", user_agent}});
    if (!res) {
      throw IngestError(IngestErrc::HttpError, "request to " + base_url + target + " failed: " +
                                                   httplib::to_string(res.error()),
                        {{"status", "0"}, {"url", base_url + target}});
    }
    HttpResponse out{res->status, res->body, std::nullopt};
    if (res->has_header("Retry-After")) {
      try {
        out.retry_after_seconds = std::stod(res->get_header_value("Retry-After"));
      } catch (const std::exception&) {
      }
    }
    return out;
  }
};

std::string sanitize(const std::string& key) {
  std::string s = key;
  for (char& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  }
  return s;
}

double number_at(const json& rec, const char* field, const std::string& path) {
  const auto it = rec.find(field);
  if (it == rec.end() || it->is_null()) return 0.0;
  if (!it->is_number()) {
    throw IngestError(IngestErrc::ParseError, path + "." + field + " is not a number",
                      {{"field", path + "." + field}});
  }
  return it->get<double>();
}

}  // namespace

void ApiConfig::validate() const {
  if (user_agent.empty()) {
    throw IngestError(IngestErrc::InvalidConfig, "user_agent must be a non-empty description",
                      {{"field", "user_agent"}});
  }
  if (min_interval < std::chrono::milliseconds(100)) {
    throw IngestError(IngestErrc::InvalidConfig, "request interval floor must be at least 100 ms",
                      {{"field", "min_interval"}, {"value", std::to_string(min_interval.count())}});
  }
  if (base_url.empty()) {
    throw IngestError(IngestErrc::InvalidConfig, "base_url is empty", {{"field", "base_url"}});
  }
  if (max_retries < 0) {
    throw IngestError(IngestErrc::InvalidConfig, "max_retries must be >= 0", {{"field", "max_retries"}});
  }
}

std::shared_ptr<HttpTransport> make_default_transport() { return std::make_shared<HttplibTransport>(); }

std::vector<PanelObservation> parse_timeseries(const std::string& body, ItemId item) {
  json doc;
  try {
    doc = json::parse(body);
  } catch (const json::parse_error& e) {
    throw IngestError(IngestErrc::ParseError, std::string("invalid JSON: ") + e.what(),
                      {{"field", "$"}, {"byte", std::to_string(e.byte)}});
  }
  if (!doc.is_object()) throw IngestError(IngestErrc::ParseError, "payload is not an object", {{"field", "$"}});
  if (doc.contains("error")) {
    throw IngestError(IngestErrc::UnknownItem, "API rejected item " + std::to_string(item.value),
                      {{"item_id", std::to_string(item.value)}});
  }
  const auto data = doc.find("data");
  if (data == doc.end() || !data->is_array()) {
    throw IngestError(IngestErrc::ParseError, "missing array 'data'", {{"field", "data"}});
  }
  std::vector<PanelObservation> out;
  for (std::size_t k = 0; k < data->size(); ++k) {
    const auto& rec = (*data)[k];
    const std::string path = "data[" + std::to_string(k) + "]";
    if (!rec.is_object()) throw IngestError(IngestErrc::ParseError, path + " is not an object", {{"field", path}});
    const auto ts = rec.find("timestamp");
    if (ts == rec.end() || !ts->is_number_integer()) {
      throw IngestError(IngestErrc::ParseError, path + ".timestamp missing or not an integer",
                        {{"field", path + ".timestamp"}});
    }
    const auto low = rec.find("avgLowPrice");
    if (low == rec.end() || low->is_null()) continue;
    const double price = number_at(rec, "avgLowPrice", path);
    const double volume = number_at(rec, "highPriceVolume", path) + number_at(rec, "lowPriceVolume", path);
    const std::int64_t secs = ts->get<std::int64_t>();
    const std::int64_t day = secs >= 0 ? secs / 86400 : -((-secs + 86399) / 86400);
    out.push_back({item, Date{std::chrono::days{day}}, price, volume});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.date < b.date; });
  return out;
}

ApiClient::ApiClient(ApiConfig config, std::shared_ptr<HttpTransport> transport)
    : config_(std::move(config)), transport_(transport ? std::move(transport) : make_default_transport()) {
  config_.validate();
}

std::string ApiClient::cache_key(ItemId item, const std::string& step, const DateWindow& range) const {
  return "item" + std::to_string(item.value) + "_" + step + "_" +
         (range.start ? format_date(*range.start) : std::string("open")) + "_" +
         (range.end ? format_date(*range.end) : std::string("open"));
}

std::optional<std::string> ApiClient::cache_read(const std::string& key) const {
  if (config_.cache_dir.empty()) return std::nullopt;
  std::ifstream in(config_.cache_dir / (sanitize(key) + ".json"), std::ios::binary);
  if (!in) return std::nullopt;
  try {
    const json entry = json::parse(in);
    if (entry.value("key", "") != key) return std::nullopt;
    return entry.at("body").get<std::string>();
  } catch (const json::exception&) {
    return std::nullopt;
  }
}

void ApiClient::cache_write(const std::string& key, const std::string& body) const {
  if (config_.cache_dir.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(config_.cache_dir, ec);
  const std::string file = sanitize(key) + ".json";
  {
    std::ofstream out(config_.cache_dir / file, std::ios::binary);
    if (!out) {
      throw IngestError(IngestErrc::IoError, "cannot write cache file " + (config_.cache_dir / file).string(),
                        {{"path", (config_.cache_dir / file).string()}});
    }
    out << json{{"key", key}, {"base_url", config_.base_url}, {"body", body}}.dump(2) << '\n';
  }
  const auto manifest_path = config_.cache_dir / "manifest.json";
  json manifest = json::object();
  {
    std::ifstream in(manifest_path);
    if (in) {
      try {
        manifest = json::parse(in);
      } catch (const json::exception&) {
        manifest = json::object();
      }
    }
  }
  manifest["entries"][key] = {{"file", file}, {"bytes", body.size()}};
  std::ofstream out(manifest_path);
  out << manifest.dump(2) << '\n';
}

HttpResponse ApiClient::request(const std::string& target) {
  for (int attempt = 0;; ++attempt) {
    if (last_request_) std::this_thread::sleep_until(*last_request_ + config_.min_interval);
    last_request_ = std::chrono::steady_clock::now();
    ++network_requests_;
    HttpResponse res = transport_->get(config_.base_url, target, config_.user_agent);
    const bool throttled = res.status == 429 || res.status == 503;
    if (throttled && attempt < config_.max_retries) {
      if (res.retry_after_seconds && *res.retry_after_seconds > 0) {
        const auto wait = std::chrono::duration<double>(*res.retry_after_seconds);
        std::this_thread::sleep_for(wait);
      }
      continue;
    }
    return res;
  }
}

std::vector<PanelObservation> ApiClient::fetch_timeseries(ItemId item, const std::string& step,
                                                          DateWindow range) {
  if (item.value <= 0) {
    throw IngestError(IngestErrc::UnknownItem, "item id must be positive",
                      {{"item_id", std::to_string(item.value)}});
  }
  const auto key = cache_key(item, step, range);
  std::string body;
  if (auto cached = cache_read(key)) {
    ++cache_hits_;
    body = std::move(*cached);
  } else {
    const std::string target = "/timeseries?timestep=" + step + "&id=" + std::to_string(item.value);
    const HttpResponse res = request(target);
    if (res.status != 200) {
      if ((res.status == 400 || res.status == 404) && res.body.find("error") != std::string::npos) {
        throw IngestError(IngestErrc::UnknownItem, "API rejected item " + std::to_string(item.value),
                          {{"item_id", std::to_string(item.value)}, {"status", std::to_string(res.status)}});
      }
      Error::Details d{{"status", std::to_string(res.status)}, {"url", config_.base_url + target}};
      if (res.retry_after_seconds) d.emplace_back("retry_after", std::to_string(*res.retry_after_seconds));
      throw IngestError(IngestErrc::HttpError, "HTTP " + std::to_string(res.status) + " from " + config_.base_url + target,
                        std::move(d));
    }
    body = res.body;
    parse_timeseries(body, item);
    cache_write(key, body);
  }
  auto obs = parse_timeseries(body, item);
  std::erase_if(obs, [&](const PanelObservation& o) { return !range.contains(o.date); });
  return obs;
}

std::vector<PanelObservation> fetch_timeseries(const ApiConfig& config, ItemId item, const std::string& step) {
  ApiClient client(config);
  return client.fetch_timeseries(item, step);
}

}  // namespace gelab::ingest
