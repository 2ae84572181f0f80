#pragma once

// Cross-sectional histograms of R and T and their first four moments over time.

#include <cmath>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "ratingmc/core_model.hpp"
#include "ratingmc/date.hpp"
#include "ratingmc/format.hpp"

namespace ratingmc {

/// Counts over consecutive integer bins starting at `first_value`.
struct Histogram {
  int first_value = 0;
  std::vector<long> counts;
  long total = 0;

  [[nodiscard]] long count(int value) const {
    const int k = value - first_value;
    if (k < 0 || k >= static_cast<int>(counts.size())) return 0;
    return counts[static_cast<std::size_t>(k)];
  }
  [[nodiscard]] int last_value() const { return first_value + static_cast<int>(counts.size()) - 1; }
};

inline Histogram rating_histogram(const Panel& panel, Date t) {
  require_in_span(panel, t);
  Histogram hist{0, std::vector<long>(kNumStates, 0), 0};
  for (const auto& h : panel.histories()) {
    if (const auto s = rating_at(h, t)) {
      ++hist.counts[static_cast<std::size_t>(s->index())];
      ++hist.total;
    }
  }
  return hist;
}

/// Histogram of T(t, tau) over banks rated on both t and t - tau.
inline Histogram increment_histogram(const Panel& panel, Date t, Days tau = kDefaultTau) {
  Histogram hist{-(kNumStates - 1), std::vector<long>(2 * kNumStates - 1, 0), 0};
  for (const auto& h : panel.histories()) {
    if (const auto inc = increment(h, t, tau)) {
      ++hist.counts[static_cast<std::size_t>(inc->value + kNumStates - 1)];
      ++hist.total;
    }
  }
  return hist;
}

/// Population moments; skewness and kurtosis (non-excess) are absent for a
/// degenerate sample.
struct MomentSet {
  double mean = 0.0;
  double variance = 0.0;
  std::optional<double> skewness;
  std::optional<double> kurtosis;
};

/// Variance below which higher standardized moments are reported as undefined.
inline constexpr double kDegenerateVariance = 1e-12;

/// Single-pass accumulator of central moments up to order four.
class MomentAccumulator {
 public:
  void add(double x) {
    const double n1 = static_cast<double>(n_);
    ++n_;
    const double n = static_cast<double>(n_);
    const double delta = x - mean_;
    const double delta_n = delta / n;
    const double delta_n2 = delta_n * delta_n;
    const double term1 = delta * delta_n * n1;
    mean_ += delta_n;
    m4_ += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * m2_ - 4.0 * delta_n * m3_;
    m3_ += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * m2_;
    m2_ += term1;
  }

  [[nodiscard]] std::size_t size() const { return n_; }

  [[nodiscard]] MomentSet result() const {
    if (n_ == 0) throw std::invalid_argument("moments of an empty sample");
    const double n = static_cast<double>(n_);
    MomentSet m;
    m.mean = mean_;
    m.variance = std::max(0.0, m2_ / n);
    if (m.variance >= kDegenerateVariance) {
      m.skewness = (m3_ / n) / std::pow(m.variance, 1.5);
      m.kurtosis = (m4_ / n) / (m.variance * m.variance);
    }
    return m;
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
  double m3_ = 0.0;
  double m4_ = 0.0;
};

inline MomentSet moments(std::span<const double> sample) {
  MomentAccumulator acc;
  for (double x : sample) acc.add(x);
  return acc.result();
}

struct MomentRow {
  Date date;
  MomentSet rating;                    // moments of R over banks rated on `date`
  std::optional<MomentSet> increment;  // moments of T(date, tau); absent when no bank qualifies
};

/// First day of every month inside the span.
inline std::vector<Date> month_starts(const Span& span) {
  std::vector<Date> dates;
  if (span.empty()) return dates;
  for (Date d = first_of_month_on_or_after(span.start); d <= span.end; d = add_months(d, 1)) {
    dates.push_back(d);
  }
  return dates;
}

/// Every `step` days from the span start.
inline std::vector<Date> every_n_days(const Span& span, int step) {
  if (step < 1) throw std::invalid_argument("sampling step must be at least one day");
  std::vector<Date> dates;
  for (long k = 0; k < span.day_count(); k += step) dates.push_back(span.start + Days{k});
  return dates;
}

/// Moments of the R and T cross-sections on each sampled date. Dates without
/// any rated bank produce no row.
inline std::vector<MomentRow> moment_series(const Panel& panel, std::span<const Date> dates,
                                            Days tau = kDefaultTau) {
  if (tau.count() <= 0) throw std::invalid_argument("increment horizon tau must be at least one day");
  std::vector<MomentRow> rows;
  for (const Date t : dates) {
    require_in_span(panel, t);
    MomentAccumulator r_acc;
    MomentAccumulator t_acc;
    for (const auto& h : panel.histories()) {
      const auto now = rating_at(h, t);
      if (!now) continue;
      r_acc.add(now->index());
      if (const auto before = rating_at(h, t - tau)) t_acc.add(now->index() - before->index());
    }
    if (r_acc.size() == 0) continue;
    MomentRow row{t, r_acc.result(), std::nullopt};
    if (t_acc.size() > 0) row.increment = t_acc.result();
    rows.push_back(row);
  }
  return rows;
}

/// Monthly cadence by default, matching the rolling test series.
inline std::vector<MomentRow> moment_series(const Panel& panel, Days tau = kDefaultTau) {
  const auto dates = month_starts(panel.span());
  return moment_series(panel, dates, tau);
}

inline void write_moment_series(std::ostream& out, std::span<const MomentRow> rows) {
  auto cell = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string{}; };
  auto put = [&](const std::optional<MomentSet>& m) {
    if (!m) {
      out << ",,,,";
      return;
    }
    out << ',' << format_number(m->mean) << ',' << format_number(m->variance) << ','
        << cell(m->skewness) << ',' << cell(m->kurtosis);
  };
  out << "date,mean_R,var_R,skew_R,kurt_R,mean_T,var_T,skew_T,kurt_T\n";
  for (const auto& row : rows) {
    out << format_date(row.date);
    put(row.rating);
    put(row.increment);
    out << '\n';
  }
}

}  // namespace ratingmc
