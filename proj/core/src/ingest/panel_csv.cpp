#include "gelab/ingest/panel_csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "gelab/csv.hpp"
#include "gelab/ingest/errors.hpp"

namespace gelab::ingest {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& source, std::size_t line, const std::string& field,
                               const std::string& message) {
  throw IngestError(IngestErrc::SchemaError, source + ":" + std::to_string(line) + ": " + message,
                    {{"path", source}, {"row", std::to_string(line)}, {"field", field}});
}

template <class T>
T parse_number(std::string_view text, const std::string& source, std::size_t line, const char* field) {
  T v{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    schema_error(source, line, field, std::string("cannot parse ") + field + " '" + std::string(text) + "'");
  }
  return v;
}

const char* kind_name(EffectKind k) {
  switch (k) {
    case EffectKind::rd_step: return "rd_step";
    case EffectKind::rk_slope: return "rk_slope";
    case EffectKind::did_level: return "did_level";
  }
  return "did_level";
}

EffectKind kind_from(const std::string& s) {
  if (s == "rd_step") return EffectKind::rd_step;
  if (s == "rk_slope") return EffectKind::rk_slope;
  if (s == "did_level") return EffectKind::did_level;
  throw IngestError(IngestErrc::ParseError, "unknown effect kind '" + s + "'", {{"field", "kind"}});
}

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  return csv_path.string() + ".meta.json";
}

json metadata_to_json(const PanelMetadata& meta) {
  json j;
  j["provenance"] = meta.provenance == Provenance::simulated ? "simulated" : "ingested";
  if (meta.ground_truth) {
    json gt = json::array();
    for (const auto& e : *meta.ground_truth) {
      json r{{"kind", kind_name(e.kind)},
             {"magnitude", e.magnitude},
             {"cutoff", e.cutoff},
             {"price_unit", e.price_unit},
             {"item_set", e.item_set},
             {"outcome", e.outcome == OutcomeVar::price ? "price" : "volume"}};
      json items = json::array();
      for (ItemId id : e.items) items.push_back(id.value);
      r["items"] = items;
      r["effect_date"] = e.effect_date ? json(format_date(*e.effect_date)) : json(nullptr);
      gt.push_back(r);
    }
    j["ground_truth"] = gt;
  } else {
    j["ground_truth"] = nullptr;
  }
  json sets = json::object();
  for (const auto& [name, ids] : meta.item_sets) {
    json a = json::array();
    for (ItemId id : ids) a.push_back(id.value);
    sets[name] = a;
  }
  j["item_sets"] = sets;
  j["attributes"] = meta.attributes;
  return j;
}

PanelMetadata metadata_from_json(const json& j) {
  PanelMetadata meta;
  try {
    meta.provenance = j.value("provenance", "ingested") == "simulated" ? Provenance::simulated : Provenance::ingested;
    if (j.contains("ground_truth") && !j["ground_truth"].is_null()) {
      std::vector<InjectedEffect> gt;
      for (const auto& r : j["ground_truth"]) {
        InjectedEffect e;
        e.kind = kind_from(r.at("kind").get<std::string>());
        e.magnitude = r.at("magnitude").get<double>();
        e.cutoff = r.value("cutoff", 0.0);
        e.price_unit = r.value("price_unit", 1.0);
        e.item_set = r.value("item_set", "");
        e.outcome = r.value("outcome", "volume") == "price" ? OutcomeVar::price : OutcomeVar::volume;
        for (const auto& id : r.value("items", json::array())) e.items.emplace_back(id.get<std::int64_t>());
        if (r.contains("effect_date") && !r["effect_date"].is_null()) {
          e.effect_date = parse_date(r["effect_date"].get<std::string>());
        }
        gt.push_back(std::move(e));
      }
      meta.ground_truth = std::move(gt);
    }
    if (j.contains("item_sets")) {
      for (const auto& [name, ids] : j["item_sets"].items()) {
        auto& v = meta.item_sets[name];
        for (const auto& id : ids) v.emplace_back(id.get<std::int64_t>());
      }
    }
    if (j.contains("attributes")) meta.attributes = j["attributes"].get<std::map<std::string, std::string>>();
  } catch (const json::exception& e) {
    throw IngestError(IngestErrc::ParseError, std::string("invalid panel metadata: ") + e.what(), {{"field", "meta"}});
  } catch (const std::invalid_argument& e) {
    throw IngestError(IngestErrc::ParseError, std::string("invalid panel metadata: ") + e.what(),
                      {{"field", "effect_date"}});
  }
  return meta;
}

Panel parse_panel_csv(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) schema_error(source, 1, "header", "empty file; expected header item_id,date,price,volume");
  ++lineno;
  {
    const auto h = split_csv_line(line);
    const std::vector<std::string_view> expect{"item_id", "date", "price", "volume"};
    if (h != expect) schema_error(source, 1, "header", "header must be item_id,date,price,volume");
  }
  std::vector<PanelObservation> obs;
  std::map<std::pair<ItemId, Date>, std::size_t> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const auto f = split_csv_line(line);
    if (f.size() != 4) {
      schema_error(source, lineno, "row", "expected 4 fields, found " + std::to_string(f.size()));
    }
    const auto item = ItemId{parse_number<std::int64_t>(f[0], source, lineno, "item_id")};
    const auto date = try_parse_date(f[1]);
    if (!date) schema_error(source, lineno, "date", "cannot parse date '" + std::string(f[1]) + "'");
    const double price = parse_number<double>(f[2], source, lineno, "price");
    const double volume = parse_number<double>(f[3], source, lineno, "volume");
    if (!std::isfinite(price)) schema_error(source, lineno, "price", "price is not finite");
    if (!std::isfinite(volume) || volume < 0.0) schema_error(source, lineno, "volume", "volume must be finite and >= 0");
    if (price <= 0.0 && volume > 0.0) {
      throw IngestError(IngestErrc::NonPositivePrice,
                        source + ":" + std::to_string(lineno) + ": non-positive price on a traded row",
                        {{"path", source}, {"row", std::to_string(lineno)}, {"field", "price"}});
    }
    const auto [it, fresh] = seen.emplace(std::pair{item, *date}, lineno);
    if (!fresh) {
      throw IngestError(IngestErrc::DuplicateKey,
                        source + ":" + std::to_string(lineno) + ": duplicate (item " + std::to_string(item.value) +
                            ", " + format_date(*date) + "), first seen on line " + std::to_string(it->second),
                        {{"path", source},
                         {"row", std::to_string(lineno)},
                         {"first_row", std::to_string(it->second)},
                         {"item_id", std::to_string(item.value)},
                         {"date", format_date(*date)}});
    }
    obs.push_back({item, *date, price, volume});
  }
  return Panel(std::move(obs));
}

Panel load_panel_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IngestError(IngestErrc::IoError, "cannot open " + path.string(), {{"path", path.string()}});
  }
  Panel panel = parse_panel_csv(in, path.string());
  const auto side = sidecar_path(path);
  if (std::filesystem::exists(side)) {
    std::ifstream ms(side);
    json j;
    try {
      j = json::parse(ms);
    } catch (const json::parse_error& e) {
      throw IngestError(IngestErrc::ParseError, "invalid sidecar " + side.string() + ": " + e.what(),
                        {{"path", side.string()}});
    }
    panel.metadata() = metadata_from_json(j);
  }
  return panel;
}

void write_panel_csv(std::ostream& os, const Panel& panel) {
  os << "item_id,date,price,volume\n";
  for (const auto& o : panel.observations()) {
    os << o.item.value << ',' << format_date(o.date) << ',' << format_double(o.price) << ','
       << format_double(o.volume) << '\n';
  }
}

void write_panel_csv(const std::filesystem::path& path, const Panel& panel) {
  {
    std::ofstream out(path);
    if (!out) throw IngestError(IngestErrc::IoError, "cannot write " + path.string(), {{"path", path.string()}});
    write_panel_csv(out, panel);
  }
  std::ofstream meta(sidecar_path(path));
  if (!meta) {
    throw IngestError(IngestErrc::IoError, "cannot write " + sidecar_path(path).string(),
                      {{"path", sidecar_path(path).string()}});
  }
  meta << metadata_to_json(panel.metadata()).dump(2) << '\n';
}

}  // namespace gelab::ingest
