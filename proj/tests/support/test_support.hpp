#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <unistd.h>

#include "gelab/date.hpp"
#include "gelab/panel.hpp"

namespace gelab::test {

/// Directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "gelab") {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            (tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& p);
void write_file(const std::filesystem::path& p, const std::string& content);

/// Fixture root (tests/fixtures in the source tree).
std::filesystem::path fixture_path(const std::string& name);

inline Date day(int n) { return add_days(make_date(2021, 11, 1), n); }

/// |a - b| <= tol * max(1, |b|).
inline bool near_rel(double a, double b, double tol) {
  const double scale = std::max(1.0, std::abs(b));
  return std::abs(a - b) <= tol * scale;
}

}  // namespace gelab::test
