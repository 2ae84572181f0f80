#pragma once

// Calendar days, closed observation spans and half-open estimation windows.

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ratingmc {

using Date = std::chrono::sys_days;
using Days = std::chrono::days;

/// Length of a year in days; all rates are per year of this length.
inline constexpr double kDaysPerYear = 365.0;

inline Date make_date(int year, unsigned month, unsigned day) {
  const std::chrono::year_month_day ymd{std::chrono::year{year},
                                        std::chrono::month{month},
                                        std::chrono::day{day}};
  if (!ymd.ok()) {
    throw std::invalid_argument("invalid calendar date");
  }
  return Date{ymd};
}

/// Strict `YYYY-MM-DD` parser; rejects anything else, including invalid days.
inline std::optional<Date> parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    return std::nullopt;
  }
  auto field = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
    int value = 0;
    const char* first = text.data() + pos;
    const char* last = first + len;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) return std::nullopt;
    return value;
  };
  const auto y = field(0, 4);
  const auto m = field(5, 2);
  const auto d = field(8, 2);
  if (!y || !m || !d || *m < 1 || *d < 1) return std::nullopt;
  const std::chrono::year_month_day ymd{std::chrono::year{*y},
                                        std::chrono::month{static_cast<unsigned>(*m)},
                                        std::chrono::day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date{ymd};
}

inline std::string format_date(Date date) {
  const std::chrono::year_month_day ymd{date};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

/// Calendar month arithmetic; the day of month is clamped to the target month.
inline Date add_months(Date date, int months) {
  const std::chrono::year_month_day ymd{date};
  auto shifted = ymd.year() / ymd.month() + std::chrono::months{months};
  const auto last = std::chrono::year_month_day_last{shifted.year(),
                                                     std::chrono::month_day_last{shifted.month()}};
  const auto day = std::min(ymd.day(), last.day());
  return Date{shifted.year() / shifted.month() / day};
}

inline Date first_of_month_on_or_after(Date date) {
  const std::chrono::year_month_day ymd{date};
  if (ymd.day() == std::chrono::day{1}) return date;
  return Date{(ymd.year() / ymd.month() + std::chrono::months{1}) / std::chrono::day{1}};
}

/// Closed range of days [start, end]. A span with end < start is empty.
struct Span {
  Date start;
  Date end;

  [[nodiscard]] bool empty() const { return end < start; }
  [[nodiscard]] bool contains(Date d) const { return start <= d && d <= end; }
  /// Number of days in the span, both endpoints included.
  [[nodiscard]] long day_count() const {
    return empty() ? 0L : static_cast<long>((end - start).count()) + 1;
  }

  static Span empty_span() { return Span{Date{Days{1}}, Date{Days{0}}}; }

  friend bool operator==(const Span&, const Span&) = default;
};

/// Estimation window between two dates, t0 < tf.
///
/// Transitions count when dated in (t0, tf]; exposure accrues on the days of
/// [t0, tf); cohorts are read off the ratings held on t0 and on tf.
struct Window {
  Date start;
  Date end;

  [[nodiscard]] long day_count() const { return static_cast<long>((end - start).count()); }
  [[nodiscard]] double years() const { return static_cast<double>(day_count()) / kDaysPerYear; }
  /// Midpoint rounded down to whole days.
  [[nodiscard]] Date midpoint() const { return start + Days{day_count() / 2}; }

  friend bool operator==(const Window&, const Window&) = default;
};

inline void require_window(const Window& window, const Span& span) {
  if (!(window.start < window.end)) {
    throw std::invalid_argument("window must satisfy t0 < tf: " + format_date(window.start) +
                                " .. " + format_date(window.end));
  }
  if (!span.contains(window.start) || !span.contains(window.end)) {
    throw std::invalid_argument("window " + format_date(window.start) + " .. " +
                                format_date(window.end) + " lies outside the observation span");
  }
}

}  // namespace ratingmc
