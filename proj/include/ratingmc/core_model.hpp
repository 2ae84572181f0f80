#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ratingmc/date.hpp"

namespace ratingmc {

inline constexpr int kNumStates = 15;

/// A rating on the 15-notch scale, encoded 0 (E-, weakest) .. 14 (A+, strongest).
class RatingState {
 public:
  constexpr RatingState() = default;
  constexpr explicit RatingState(int index) : index_(index) {
    if (index < 0 || index >= kNumStates) {
      throw std::out_of_range("rating index out of range: " + std::to_string(index));
    }
  }

  [[nodiscard]] constexpr int index() const { return index_; }

  friend constexpr auto operator<=>(RatingState, RatingState) = default;

 private:
  int index_ = 0;
};

/// The ordered financial-strength scale.
///
/// Index 0 is the bottom of the scale (E-, highest risk); index 14 is A+.
struct RatingScale {
  static constexpr std::array<std::string_view, kNumStates> labels{
      "E-", "E", "E+", "D-", "D", "D+", "C-", "C", "C+", "B-", "B", "B+", "A-", "A", "A+"};

  static constexpr int size() { return kNumStates; }

  static constexpr std::optional<RatingState> encode(std::string_view label) {
    for (int k = 0; k < kNumStates; ++k) {
      if (labels[static_cast<std::size_t>(k)] == label) return RatingState{k};
    }
    return std::nullopt;
  }

  static constexpr std::string_view decode(RatingState state) {
    return labels[static_cast<std::size_t>(state.index())];
  }
};

struct RatingEvent {
  Date date;
  RatingState state;

  friend bool operator==(const RatingEvent&, const RatingEvent&) = default;
};

/// One bank's ratings as a step function of the calendar day.
///
/// The bank is rated from its first event until the day before its withdrawal
/// (if any). Consecutive events always carry different states, so every event
/// after the first is a transition.
class RatingHistory {
 public:
  RatingHistory(std::string bank_id, std::vector<RatingEvent> events,
                std::optional<Date> withdrawn = std::nullopt)
      : bank_id_(std::move(bank_id)), events_(std::move(events)), withdrawn_(withdrawn) {
    if (events_.empty()) {
      throw std::invalid_argument("rating history for '" + bank_id_ + "' has no events");
    }
    for (std::size_t k = 1; k < events_.size(); ++k) {
      if (!(events_[k - 1].date < events_[k].date)) {
        throw std::invalid_argument("rating history for '" + bank_id_ +
                                    "' has events out of date order");
      }
      if (events_[k - 1].state == events_[k].state) {
        throw std::invalid_argument("rating history for '" + bank_id_ +
                                    "' repeats a state in consecutive events");
      }
    }
    if (withdrawn_ && !(events_.back().date < *withdrawn_)) {
      throw std::invalid_argument("rating history for '" + bank_id_ +
                                  "' is withdrawn before its last event");
    }
  }

  [[nodiscard]] const std::string& bank_id() const { return bank_id_; }
  [[nodiscard]] std::span<const RatingEvent> events() const { return events_; }
  [[nodiscard]] Date first_date() const { return events_.front().date; }
  [[nodiscard]] std::optional<Date> withdrawal_date() const { return withdrawn_; }
  /// Last day on which the bank holds a rating; absent while coverage is open.
  [[nodiscard]] std::optional<Date> last_rated_date() const {
    if (!withdrawn_) return std::nullopt;
    return *withdrawn_ - Days{1};
  }
  [[nodiscard]] bool rated_on(Date t) const {
    return first_date() <= t && (!withdrawn_ || t < *withdrawn_);
  }
  [[nodiscard]] std::size_t transition_count() const { return events_.size() - 1; }

  friend bool operator==(const RatingHistory&, const RatingHistory&) = default;

 private:
  std::string bank_id_;
  std::vector<RatingEvent> events_;
  std::optional<Date> withdrawn_;
};

/// State held on day t, or absent when the bank is not rated that day.
inline std::optional<RatingState> rating_at(const RatingHistory& history, Date t) {
  if (!history.rated_on(t)) return std::nullopt;
  const auto events = history.events();
  const auto after = std::upper_bound(events.begin(), events.end(), t,
                                      [](Date d, const RatingEvent& e) { return d < e.date; });
  return std::prev(after)->state;
}

/// Rating change T(t, tau) = R(t) - R(t - tau) of a single bank.
struct Increment {
  std::string bank_id;
  Date t;
  Days tau;
  int value;
};

inline constexpr Days kDefaultTau{365};

inline std::optional<Increment> increment(const RatingHistory& history, Date t,
                                          Days tau = kDefaultTau) {
  if (tau.count() <= 0) {
    throw std::invalid_argument("increment horizon tau must be at least one day");
  }
  const auto now = rating_at(history, t);
  const auto before = rating_at(history, t - tau);
  if (!now || !before) return std::nullopt;
  return Increment{history.bank_id(), t, tau, now->index() - before->index()};
}

/// Cross-section of rating histories over a global observation span.
class Panel {
 public:
  Panel() : span_(Span::empty_span()) {}

  Panel(Span span, std::vector<RatingHistory> histories)
      : span_(span), histories_(std::move(histories)) {
    std::sort(histories_.begin(), histories_.end(),
              [](const RatingHistory& a, const RatingHistory& b) { return a.bank_id() < b.bank_id(); });
    for (std::size_t k = 1; k < histories_.size(); ++k) {
      if (histories_[k - 1].bank_id() == histories_[k].bank_id()) {
        throw std::invalid_argument("duplicate bank id '" + histories_[k].bank_id() + "'");
      }
    }
    for (const auto& h : histories_) {
      const bool inside = span_.contains(h.first_date()) && span_.contains(h.events().back().date) &&
                          (!h.withdrawal_date() || *h.withdrawal_date() <= span_.end);
      if (!inside) {
        throw std::invalid_argument("coverage of '" + h.bank_id() +
                                    "' is not contained in the observation span");
      }
    }
  }

  [[nodiscard]] const Span& span() const { return span_; }
  [[nodiscard]] std::span<const RatingHistory> histories() const { return histories_; }
  [[nodiscard]] std::size_t size() const { return histories_.size(); }
  [[nodiscard]] bool empty() const { return histories_.empty(); }

  /// Total number of recorded state changes, N_T.
  [[nodiscard]] std::size_t total_transitions() const {
    std::size_t n = 0;
    for (const auto& h : histories_) n += h.transition_count();
    return n;
  }

  friend bool operator==(const Panel&, const Panel&) = default;

 private:
  Span span_;
  std::vector<RatingHistory> histories_;
};

inline void require_in_span(const Panel& panel, Date t) {
  if (!panel.span().contains(t)) {
    throw std::out_of_range("date " + format_date(t) + " is outside the observation span");
  }
}

/// N_R(t): number of banks holding a rating on day t.
inline std::size_t count_rated(const Panel& panel, Date t) {
  require_in_span(panel, t);
  return static_cast<std::size_t>(std::count_if(
      panel.histories().begin(), panel.histories().end(),
      [t](const RatingHistory& h) { return h.rated_on(t); }));
}

/// N_R^(i)(t) for every state i.
inline std::array<std::size_t, kNumStates> count_rated_by_state(const Panel& panel, Date t) {
  require_in_span(panel, t);
  std::array<std::size_t, kNumStates> counts{};
  for (const auto& h : panel.histories()) {
    if (const auto s = rating_at(h, t)) ++counts[static_cast<std::size_t>(s->index())];
  }
  return counts;
}

}  // namespace ratingmc
