#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "gelab/panel.hpp"

namespace gelab::ingest {

/// Reads `item_id,date,price,volume`. Errors name the 1-based line: SchemaError (header,
/// field count, unparsable or negative field), DuplicateKey (with the first occurrence),
/// NonPositivePrice (price <= 0 on a row with volume > 0).
Panel parse_panel_csv(std::istream& in, const std::string& source = "<stream>");

/// Loads the CSV and, when present, the sidecar `<path>.meta.json` with provenance, ground
/// truth, item sets and attributes.
Panel load_panel_csv(const std::filesystem::path& path);

/// Writes the CSV (prices and volumes in shortest round-trip form) and its sidecar.
void write_panel_csv(const std::filesystem::path& path, const Panel& panel);
void write_panel_csv(std::ostream& os, const Panel& panel);

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

nlohmann::json metadata_to_json(const PanelMetadata& meta);
PanelMetadata metadata_from_json(const nlohmann::json& j);

}  // namespace gelab::ingest
