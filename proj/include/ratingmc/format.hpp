#pragma once

#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

namespace ratingmc {

/// Significant digits used for every series written as CSV.
inline constexpr int kSeriesDigits = 12;
/// Significant digits used for serialized matrices.
inline constexpr int kMatrixDigits = 17;

inline std::string format_number(double value, int digits = kSeriesDigits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_fields(std::string_view line, char sep = ',') {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const auto next = line.find(sep, pos);
    fields.push_back(trim(line.substr(pos, next == std::string_view::npos ? next : next - pos)));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return fields;
}

}  // namespace detail

}  // namespace ratingmc
