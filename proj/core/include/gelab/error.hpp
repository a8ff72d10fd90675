#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace gelab {

/// Base for every structured failure raised by the library.
///
/// `code()` is a stable machine-readable name ("InsufficientFunds", "ZeroVolumeWeek", ...);
/// `details()` carries the fields a caller needs to act on the error (row number, week, reset
/// time, ...). The CLI serializes both into its error JSON.
class Error : public std::runtime_error {
 public:
  using Details = std::vector<std::pair<std::string, std::string>>;

  Error(std::string code, const std::string& message, Details details = {})
      : std::runtime_error(message), code_(std::move(code)), details_(std::move(details)) {}

  const std::string& code() const noexcept { return code_; }
  const Details& details() const noexcept { return details_; }

  std::string detail(const std::string& key) const {
    for (const auto& [k, v] : details_) {
      if (k == key) return v;
    }
    return {};
  }

 private:
  std::string code_;
  Details details_;
};

}  // namespace gelab
