#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace gelab {

using Date = std::chrono::sys_days;

Date make_date(int year, unsigned month, unsigned day);

/// Parses `YYYY-MM-DD`. Throws std::invalid_argument on anything else.
Date parse_date(std::string_view iso);
std::optional<Date> try_parse_date(std::string_view iso);

std::string format_date(Date d);

/// Whole days from `from` to `to` (negative when `to` precedes `from`).
inline int days_between(Date from, Date to) { return static_cast<int>((to - from).count()); }

inline Date add_days(Date d, int n) { return d + std::chrono::days{n}; }

/// Seven-day bin index of `d` relative to `anchor`; bin 0 starts at `anchor`.
inline int week_index(Date anchor, Date d) {
  const int n = days_between(anchor, d);
  return n >= 0 ? n / 7 : -((-n + 6) / 7);
}

/// Inclusive date range; unset bounds are open.
struct DateWindow {
  std::optional<Date> start;
  std::optional<Date> end;

  bool contains(Date d) const {
    return (!start || d >= *start) && (!end || d <= *end);
  }
};

}  // namespace gelab
