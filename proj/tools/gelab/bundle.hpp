#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace gelab::cli {

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::filesystem::path& path);

/// Output directory plus the manifest describing it. Artifacts are recorded with their
/// SHA-256 as they are written; the manifest holds no wall-clock time so a simulated bundle
/// re-run from it is byte-identical.
class Bundle {
 public:
  Bundle(std::filesystem::path dir, std::string command);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path path(const std::string& name) const { return dir_ / name; }

  void write(const std::string& name, std::string_view content);
  /// Records a file already written into the directory by a library call.
  void record(const std::string& name);
  void input(const std::string& name, const std::filesystem::path& file);

  nlohmann::json& parameters() { return manifest_["parameters"]; }
  void set(const std::string& key, nlohmann::json value) { manifest_[key] = std::move(value); }

  const std::map<std::string, std::string>& artifacts() const { return artifacts_; }

  /// Writes manifest.json; returns its content.
  std::string finish();

 private:
  std::filesystem::path dir_;
  nlohmann::json manifest_;
  std::map<std::string, std::string> artifacts_;
};

}  // namespace gelab::cli
