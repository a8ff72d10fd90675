#include "bundle.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "gelab/ingest/errors.hpp"

namespace gelab::cli {

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), md.data(), &len, EVP_sha256(), nullptr);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xF];
  }
  return out;
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ingest::IngestError(ingest::IngestErrc::IoError, "cannot read " + path.string(), {{"path", path.string()}});
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

Bundle::Bundle(std::filesystem::path dir, std::string command) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec || !std::filesystem::is_directory(dir_)) {
    throw ingest::IngestError(ingest::IngestErrc::IoError, "cannot create output directory " + dir_.string(),
                              {{"path", dir_.string()}});
  }
  manifest_["tool"] = "gelab";
  manifest_["version"] = GELAB_VERSION;
  manifest_["command"] = std::move(command);
  manifest_["parameters"] = nlohmann::json::object();
  manifest_["inputs"] = nlohmann::json::object();
}

void Bundle::write(const std::string& name, std::string_view content) {
  const auto p = path(name);
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ingest::IngestError(ingest::IngestErrc::IoError, "cannot write " + p.string(), {{"path", p.string()}});
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  artifacts_[name] = sha256_hex(content);
}

void Bundle::record(const std::string& name) { artifacts_[name] = sha256_file(path(name)); }

void Bundle::input(const std::string& name, const std::filesystem::path& file) {
  manifest_["inputs"][name] = sha256_file(file);
}

std::string Bundle::finish() {
  manifest_["artifacts"] = artifacts_;
  const std::string text = manifest_.dump(2) + "\n";
  std::ofstream out(path("manifest.json"), std::ios::binary);
  out << text;
  return text;
}

}  // namespace gelab::cli
