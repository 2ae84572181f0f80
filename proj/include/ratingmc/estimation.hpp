#pragma once

// Transition counts, exposures, the duration-based generator estimate and the
// cohort transition matrix.

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "ratingmc/core_model.hpp"
#include "ratingmc/date.hpp"
#include "ratingmc/expm.hpp"
#include "ratingmc/format.hpp"

namespace ratingmc {

using StateMatrix = Eigen::Matrix<double, kNumStates, kNumStates>;
using StateVector = Eigen::Matrix<double, kNumStates, 1>;
using CountTable = Eigen::Matrix<long long, kNumStates, kNumStates>;

/// N_T^(ij): state changes i -> j dated in (t0, tf].
struct CountMatrix {
  Window window;
  CountTable counts = CountTable::Zero();

  [[nodiscard]] long long total() const { return counts.sum(); }
};

/// Bank-years spent in each state over the days of [t0, tf).
struct ExposureVector {
  Window window;
  StateVector bank_years = StateVector::Zero();
};

inline constexpr double kGeneratorRowTolerance = 1e-12;
inline constexpr double kStochasticRowTolerance = 1e-9;
inline constexpr double kProbabilityTolerance = 1e-12;

/// Intensity matrix with nonnegative off-diagonal rates (per year) and zero row sums.
class GeneratorMatrix {
 public:
  GeneratorMatrix() : rates_(StateMatrix::Zero()) {}

  explicit GeneratorMatrix(const StateMatrix& rates) : rates_(rates) {
    if (!rates_.allFinite()) throw std::invalid_argument("generator has non-finite entries");
    for (int i = 0; i < kNumStates; ++i) {
      double magnitude = 1.0;
      for (int j = 0; j < kNumStates; ++j) {
        if (i != j && rates_(i, j) < 0.0) {
          throw std::invalid_argument("generator has a negative off-diagonal rate at (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");
        }
        magnitude = std::max(magnitude, std::abs(rates_(i, j)));
      }
      if (std::abs(rates_.row(i).sum()) > kGeneratorRowTolerance * magnitude) {
        throw std::invalid_argument("generator row " + std::to_string(i) + " does not sum to zero");
      }
    }
  }

  [[nodiscard]] const StateMatrix& rates() const { return rates_; }
  [[nodiscard]] double operator()(int i, int j) const { return rates_(i, j); }

 private:
  StateMatrix rates_;
};

/// Row-stochastic matrix of transition probabilities.
class TransitionMatrix {
 public:
  TransitionMatrix() : probabilities_(StateMatrix::Identity()) {}

  explicit TransitionMatrix(const StateMatrix& probabilities,
                            std::optional<Window> window = std::nullopt)
      : probabilities_(probabilities), window_(window) {
    if (!probabilities_.allFinite()) {
      throw std::invalid_argument("transition matrix has non-finite entries");
    }
    for (int i = 0; i < kNumStates; ++i) {
      for (int j = 0; j < kNumStates; ++j) {
        const double p = probabilities_(i, j);
        if (p < -kProbabilityTolerance || p > 1.0 + kProbabilityTolerance) {
          throw std::invalid_argument("transition probability outside [0,1] at (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")");
        }
      }
      if (std::abs(probabilities_.row(i).sum() - 1.0) > kStochasticRowTolerance) {
        throw std::invalid_argument("transition matrix row " + std::to_string(i) +
                                    " does not sum to one");
      }
    }
  }

  [[nodiscard]] const StateMatrix& probabilities() const { return probabilities_; }
  [[nodiscard]] double operator()(int i, int j) const { return probabilities_(i, j); }
  [[nodiscard]] const std::optional<Window>& window() const { return window_; }

 private:
  StateMatrix probabilities_;
  std::optional<Window> window_;
};

inline CountMatrix count_transitions(const Panel& panel, const Window& window) {
  require_window(window, panel.span());
  CountMatrix result{window};
  for (const auto& h : panel.histories()) {
    const auto events = h.events();
    for (std::size_t k = 1; k < events.size(); ++k) {
      const Date d = events[k].date;
      if (window.start < d && d <= window.end) {
        ++result.counts(events[k - 1].state.index(), events[k].state.index());
      }
    }
  }
  return result;
}

/// Daily left-endpoint sum of per-state occupancy, in bank-years.
inline ExposureVector exposures(const Panel& panel, const Window& window) {
  require_window(window, panel.span());
  Eigen::Matrix<long, kNumStates, 1> bank_days = Eigen::Matrix<long, kNumStates, 1>::Zero();
  for (const auto& h : panel.histories()) {
    const auto events = h.events();
    const Date coverage_end = h.withdrawal_date().value_or(Date::max());
    for (std::size_t k = 0; k < events.size(); ++k) {
      const Date seg_start = std::max(events[k].date, window.start);
      const Date seg_end =
          std::min({k + 1 < events.size() ? events[k + 1].date : coverage_end, coverage_end, window.end});
      if (seg_start < seg_end) bank_days(events[k].state.index()) += (seg_end - seg_start).count();
    }
  }
  ExposureVector result{window};
  result.bank_years = bank_days.cast<double>() / kDaysPerYear;
  return result;
}

/// Q_ij = N_T^(ij) / exposure_i off the diagonal, Q_ii = -sum_{j != i} Q_ij.
/// A state with no exposure gets an all-zero row.
inline GeneratorMatrix estimate_generator(const CountMatrix& counts, const ExposureVector& exposure) {
  StateMatrix q = StateMatrix::Zero();
  for (int i = 0; i < kNumStates; ++i) {
    const double e = exposure.bank_years(i);
    double row_sum = 0.0;
    for (int j = 0; j < kNumStates; ++j) {
      if (i == j) continue;
      const auto n = counts.counts(i, j);
      if (n == 0) continue;
      if (!(e > 0.0)) {
        throw std::invalid_argument("transitions out of state " +
                                    std::string(RatingScale::decode(RatingState{i})) +
                                    " recorded without any exposure in that state");
      }
      q(i, j) = static_cast<double>(n) / e;
      row_sum += q(i, j);
    }
    q(i, i) = -row_sum;
  }
  return GeneratorMatrix{q};
}

/// M(t) = exp(Q t) for t in years.
inline TransitionMatrix matrix_exponential(const GeneratorMatrix& q, double t_years) {
  if (!(t_years >= 0.0) || !std::isfinite(t_years)) {
    throw std::invalid_argument("matrix_exponential: time must be finite and nonnegative");
  }
  const StateMatrix m = expm(q.rates() * t_years);
  return TransitionMatrix{m};
}

/// Cohort estimate: among banks rated on both t0 and tf, the share of those in
/// state i on t0 that hold state j on tf. Empty cohorts give identity rows.
inline TransitionMatrix empirical_transition_matrix(const Panel& panel, const Window& window) {
  require_window(window, panel.span());
  CountTable pairs = CountTable::Zero();
  for (const auto& h : panel.histories()) {
    const auto from = rating_at(h, window.start);
    if (!from) continue;
    const auto to = rating_at(h, window.end);
    if (!to) continue;
    ++pairs(from->index(), to->index());
  }
  StateMatrix m = StateMatrix::Zero();
  for (int i = 0; i < kNumStates; ++i) {
    const auto cohort = pairs.row(i).sum();
    if (cohort == 0) {
      m(i, i) = 1.0;
      continue;
    }
    for (int j = 0; j < kNumStates; ++j) {
      m(i, j) = static_cast<double>(pairs(i, j)) / static_cast<double>(cohort);
    }
  }
  return TransitionMatrix{m, window};
}

/// Matrix CSV with state labels as header row and first column.
inline void write_matrix(std::ostream& out, const StateMatrix& m) {
  for (const auto label : RatingScale::labels) out << ',' << label;
  out << '\n';
  for (int i = 0; i < kNumStates; ++i) {
    out << RatingScale::decode(RatingState{i});
    for (int j = 0; j < kNumStates; ++j) out << ',' << format_number(m(i, j), kMatrixDigits);
    out << '\n';
  }
}

/// Inverse of write_matrix. Rows may come in any order but must use the labels.
inline StateMatrix read_matrix(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("matrix CSV is empty");
  const auto header = detail::split_fields(line);
  if (header.size() != kNumStates + 1) {
    throw std::invalid_argument("matrix CSV header must list the 15 state labels");
  }
  std::array<int, kNumStates> column{};
  for (int c = 0; c < kNumStates; ++c) {
    const auto s = RatingScale::encode(header[static_cast<std::size_t>(c + 1)]);
    if (!s) throw std::invalid_argument("matrix CSV header has unknown label");
    column[static_cast<std::size_t>(c)] = s->index();
  }
  StateMatrix m = StateMatrix::Zero();
  std::array<bool, kNumStates> seen{};
  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split_fields(line);
    if (fields.size() != kNumStates + 1) throw std::invalid_argument("matrix CSV row has wrong width");
    const auto row = RatingScale::encode(fields[0]);
    if (!row) throw std::invalid_argument("matrix CSV row has unknown label");
    seen[static_cast<std::size_t>(row->index())] = true;
    for (int c = 0; c < kNumStates; ++c) {
      const std::string cell(fields[static_cast<std::size_t>(c + 1)]);
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != cell.size() || cell.empty()) {
        throw std::invalid_argument("matrix CSV has a non-numeric cell '" + cell + "'");
      }
      m(row->index(), column[static_cast<std::size_t>(c)]) = value;
    }
  }
  for (bool s : seen) {
    if (!s) throw std::invalid_argument("matrix CSV is missing a row");
  }
  return m;
}

}  // namespace ratingmc
