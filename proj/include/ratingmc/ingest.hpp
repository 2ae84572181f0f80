#pragma once

// Event-CSV interchange (`bank_id,date,rating`) and the daily count series.

#include <algorithm>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ratingmc/core_model.hpp"
#include "ratingmc/date.hpp"
#include "ratingmc/format.hpp"

namespace ratingmc {

/// Input data is malformed or inconsistent. Messages name the offending line.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kWithdrawnLabel = "WR";
inline constexpr std::string_view kPanelHeader = "bank_id,date,rating";

struct RawRecord {
  std::string bank_id;
  Date date;
  std::string label;  // scale label or "WR"
  std::size_t line = 0;
};

/// Reads and validates rows; no cross-row checks happen here.
inline std::vector<RawRecord> read_records(std::istream& in) {
  std::vector<RawRecord> records;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = detail::trim(line);
    if (text.empty()) continue;
    if (!header_seen) {
      // Tolerate a UTF-8 byte order mark.
      auto header = text;
      if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
      const auto cols = detail::split_fields(header);
      if (cols.size() != 3 || cols[0] != "bank_id" || cols[1] != "date" || cols[2] != "rating") {
        throw DataError("line " + std::to_string(line_no) + ": expected header '" +
                        std::string(kPanelHeader) + "'");
      }
      header_seen = true;
      continue;
    }
    const auto cols = detail::split_fields(text);
    if (cols.size() != 3) {
      throw DataError("line " + std::to_string(line_no) + ": expected 3 fields, found " +
                      std::to_string(cols.size()));
    }
    if (cols[0].empty()) {
      throw DataError("line " + std::to_string(line_no) + ": empty bank_id");
    }
    const auto date = parse_date(cols[1]);
    if (!date) {
      throw DataError("line " + std::to_string(line_no) + ": invalid date '" +
                      std::string(cols[1]) + "' (expected YYYY-MM-DD)");
    }
    if (cols[2] != kWithdrawnLabel && !RatingScale::encode(cols[2])) {
      throw DataError("line " + std::to_string(line_no) + ": unknown rating label '" +
                      std::string(cols[2]) + "'");
    }
    records.push_back(RawRecord{std::string(cols[0]), *date, std::string(cols[2]), line_no});
  }
  return records;
}

/// Smallest span covering every record date; empty when there are no records.
inline Span infer_span(std::span<const RawRecord> records) {
  if (records.empty()) return Span::empty_span();
  const auto [lo, hi] = std::minmax_element(
      records.begin(), records.end(),
      [](const RawRecord& a, const RawRecord& b) { return a.date < b.date; });
  return Span{lo->date, hi->date};
}

/// Groups records per bank and builds the panel over `span`.
///
/// Re-affirmations collapse into the preceding event. Ratings dated before the
/// span carry into its first day; records after the span are ignored. "WR"
/// closes coverage, and a bank cannot be re-rated after an in-span withdrawal.
inline Panel build_panel(std::vector<RawRecord> records, const Span& span) {
  std::map<std::string, std::vector<RawRecord>> by_bank;
  for (auto& r : records) by_bank[r.bank_id].push_back(std::move(r));

  std::vector<RatingHistory> histories;
  for (auto& [bank, rows] : by_bank) {
    std::stable_sort(rows.begin(), rows.end(),
                     [](const RawRecord& a, const RawRecord& b) { return a.date < b.date; });
    for (std::size_t k = 1; k < rows.size(); ++k) {
      if (rows[k].date == rows[k - 1].date && rows[k].label != rows[k - 1].label) {
        throw DataError("line " + std::to_string(rows[k].line) + ": bank '" + bank +
                        "' has conflicting ratings '" + rows[k - 1].label + "' and '" +
                        rows[k].label + "' on " + format_date(rows[k].date));
      }
    }

    std::vector<RatingEvent> events;
    std::optional<Date> withdrawn;
    for (const auto& row : rows) {
      if (span.empty() || row.date > span.end) break;
      const bool before_span = row.date < span.start;
      const Date day = before_span ? span.start : row.date;
      if (row.label == kWithdrawnLabel) {
        if (before_span) {
          events.clear();
        } else if (!events.empty() && !withdrawn) {
          if (events.back().date == day) {
            // Only reachable when a pre-span rating was carried onto span.start.
            events.pop_back();
          } else {
            withdrawn = day;
          }
        }
        continue;
      }
      if (withdrawn) {
        throw DataError("line " + std::to_string(row.line) + ": bank '" + bank +
                        "' is rated on " + format_date(row.date) + " after its withdrawal on " +
                        format_date(*withdrawn));
      }
      const RatingState state = *RatingScale::encode(row.label);
      if (!events.empty() && events.back().date == day) {
        events.back().state = state;
      } else if (events.empty() || events.back().state != state) {
        events.push_back(RatingEvent{day, state});
      }
    }
    if (!events.empty()) histories.emplace_back(bank, std::move(events), withdrawn);
  }
  return Panel{span, std::move(histories)};
}

/// Parses an event CSV. Without an explicit span the span is inferred from the data.
inline Panel parse_panel(std::istream& in, std::optional<Span> span = std::nullopt) {
  auto records = read_records(in);
  const Span effective = span ? *span : infer_span(records);
  return build_panel(std::move(records), effective);
}

/// Writes the panel back in the interchange format, banks in id order.
inline void write_panel(std::ostream& out, const Panel& panel) {
  out << kPanelHeader << '\n';
  for (const auto& h : panel.histories()) {
    for (const auto& e : h.events()) {
      out << h.bank_id() << ',' << format_date(e.date) << ',' << RatingScale::decode(e.state)
          << '\n';
    }
    if (const auto w = h.withdrawal_date()) {
      out << h.bank_id() << ',' << format_date(*w) << ',' << kWithdrawnLabel << '\n';
    }
  }
}

struct SeriesPoint {
  Date date;
  double value;

  friend bool operator==(const SeriesPoint&, const SeriesPoint&) = default;
};

namespace detail {

inline long day_offset(const Span& span, Date d) { return static_cast<long>((d - span.start).count()); }

/// Per-day number of rated banks over the span.
inline std::vector<long> rated_per_day(const Panel& panel) {
  const auto& span = panel.span();
  const long n = span.day_count();
  std::vector<long> delta(static_cast<std::size_t>(n + 1), 0);
  for (const auto& h : panel.histories()) {
    ++delta[static_cast<std::size_t>(day_offset(span, h.first_date()))];
    if (const auto w = h.withdrawal_date()) --delta[static_cast<std::size_t>(day_offset(span, *w))];
  }
  std::vector<long> counts(static_cast<std::size_t>(n), 0);
  long running = 0;
  for (long k = 0; k < n; ++k) {
    running += delta[static_cast<std::size_t>(k)];
    counts[static_cast<std::size_t>(k)] = running;
  }
  return counts;
}

}  // namespace detail

/// N_R(t) for every day of the span.
inline std::vector<SeriesPoint> daily_counts(const Panel& panel) {
  const auto counts = detail::rated_per_day(panel);
  std::vector<SeriesPoint> series;
  series.reserve(counts.size());
  for (std::size_t k = 0; k < counts.size(); ++k) {
    series.push_back({panel.span().start + Days{static_cast<long>(k)},
                      static_cast<double>(counts[k])});
  }
  return series;
}

/// Transitions per bank as a moving average over [t - window, t].
///
/// The ratio divides the state changes dated in the window by the mean daily
/// N_R over the same days; both are restricted to the span. Days whose window
/// contains no rated bank are omitted.
inline std::vector<SeriesPoint> transitions_per_bank(const Panel& panel, int window_days = 365) {
  if (window_days < 1) throw std::invalid_argument("moving-average window must be at least one day");
  const auto& span = panel.span();
  const auto rated = detail::rated_per_day(panel);
  const long n = span.day_count();

  std::vector<long> moves(static_cast<std::size_t>(n), 0);
  for (const auto& h : panel.histories()) {
    for (const auto& e : h.events().subspan(1)) {
      ++moves[static_cast<std::size_t>(detail::day_offset(span, e.date))];
    }
  }
  // Prefix sums, index k holds the sum over days [0, k).
  std::vector<long> moves_cum(static_cast<std::size_t>(n + 1), 0);
  std::vector<long> rated_cum(static_cast<std::size_t>(n + 1), 0);
  for (long k = 0; k < n; ++k) {
    moves_cum[static_cast<std::size_t>(k + 1)] = moves_cum[static_cast<std::size_t>(k)] + moves[static_cast<std::size_t>(k)];
    rated_cum[static_cast<std::size_t>(k + 1)] = rated_cum[static_cast<std::size_t>(k)] + rated[static_cast<std::size_t>(k)];
  }

  std::vector<SeriesPoint> series;
  for (long k = 0; k < n; ++k) {
    const long first = std::max(0L, k - window_days);
    const long days = k - first + 1;
    const long bank_days = rated_cum[static_cast<std::size_t>(k + 1)] - rated_cum[static_cast<std::size_t>(first)];
    if (bank_days == 0) continue;
    const long events = moves_cum[static_cast<std::size_t>(k + 1)] - moves_cum[static_cast<std::size_t>(first)];
    const double mean_rated = static_cast<double>(bank_days) / static_cast<double>(days);
    series.push_back({span.start + Days{k}, static_cast<double>(events) / mean_rated});
  }
  return series;
}

inline void write_series(std::ostream& out, std::span<const SeriesPoint> series) {
  out << "date,value\n";
  for (const auto& p : series) out << format_date(p.date) << ',' << format_number(p.value) << '\n';
}

}  // namespace ratingmc
