#pragma once

// Synthetic rating panels from continuous-time chains: homogeneous,
// piecewise-constant (regime switch) and self-exciting (non-Markov).

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ratingmc/core_model.hpp"
#include "ratingmc/date.hpp"
#include "ratingmc/estimation.hpp"
#include "ratingmc/format.hpp"

namespace ratingmc {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Uniform in [0, 1) from the top 53 bits; independent of the standard
/// library's distribution implementations.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Banded random generator. Off-diagonal rates are rate_scale * w * u with
/// u uniform in [0.5, 1.5), w = 1 for one-notch moves and 0.25 for two-notch
/// moves; all other moves have rate zero.
inline GeneratorMatrix random_generator(std::uint64_t seed, double rate_scale) {
  if (!(rate_scale > 0.0) || !std::isfinite(rate_scale)) {
    throw std::invalid_argument("rate_scale must be positive");
  }
  std::mt19937_64 rng(detail::splitmix64(seed));
  StateMatrix q = StateMatrix::Zero();
  for (int i = 0; i < kNumStates; ++i) {
    double row = 0.0;
    for (int j = 0; j < kNumStates; ++j) {
      const int notches = std::abs(i - j);
      if (notches == 0 || notches > 2) continue;
      const double band = notches == 1 ? 1.0 : 0.25;
      q(i, j) = rate_scale * (band * (0.5 + detail::uniform01(rng)));
      row += q(i, j);
    }
    q(i, i) = -row;
  }
  return GeneratorMatrix{q};
}

enum class ScenarioKind { homogeneous, regime_switch, excited };

/// Generator in force from `start` until the next regime begins.
struct Regime {
  Date start;
  GeneratorMatrix generator;
};

/// After a downgrade, every downward rate of that bank is multiplied by
/// `multiplier` for `memory_days` days.
struct Excitation {
  double multiplier = 5.0;
  int memory_days = 90;
};

struct Scenario {
  ScenarioKind kind = ScenarioKind::homogeneous;
  std::vector<Regime> generators;
  std::optional<Excitation> excitation;
  std::size_t n_banks = 0;
  Span span = Span::empty_span();
  std::array<double, kNumStates> initial_distribution{};
  std::uint64_t seed = 0;

  void validate() const {
    if (span.empty()) throw std::invalid_argument("scenario span is empty");
    if (generators.empty()) throw std::invalid_argument("scenario has no generator");
    if (generators.front().start != span.start) {
      throw std::invalid_argument("first generator must start on the span start");
    }
    for (std::size_t k = 1; k < generators.size(); ++k) {
      if (!(generators[k - 1].start < generators[k].start) || !span.contains(generators[k].start)) {
        throw std::invalid_argument("generator schedule must be increasing and inside the span");
      }
    }
    double total = 0.0;
    for (double p : initial_distribution) {
      if (!(p >= 0.0)) throw std::invalid_argument("initial distribution has a negative entry");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw std::invalid_argument("initial distribution does not sum to one");
    }
    switch (kind) {
      case ScenarioKind::homogeneous:
        if (generators.size() != 1 || excitation) {
          throw std::invalid_argument("homogeneous scenario needs exactly one generator and no excitation");
        }
        break;
      case ScenarioKind::regime_switch:
        if (generators.size() < 2 || excitation) {
          throw std::invalid_argument("regime-switch scenario needs at least two generators");
        }
        break;
      case ScenarioKind::excited:
        if (!excitation) throw std::invalid_argument("excited scenario needs an excitation");
        break;
    }
    if (excitation && (!(excitation->multiplier > 0.0) || excitation->memory_days < 1)) {
      throw std::invalid_argument("excitation needs multiplier > 0 and memory of at least one day");
    }
  }
};

/// Bank identifiers "B<index>", zero padded so lexical and numeric order agree.
inline std::string simulated_bank_id(std::size_t index, std::size_t n_banks) {
  const std::size_t width = std::to_string(n_banks == 0 ? 0 : n_banks - 1).size();
  std::string digits = std::to_string(index);
  return "B" + std::string(width - digits.size(), '0') + digits;
}

namespace detail {

inline RatingHistory simulate_bank(const Scenario& sc, std::size_t bank,
                                   const std::vector<double>& boundaries) {
  std::mt19937_64 rng(splitmix64(sc.seed ^ splitmix64(static_cast<std::uint64_t>(bank) + 1)));

  int state = kNumStates - 1;
  {
    const double u = uniform01(rng);
    double cum = 0.0;
    for (int k = 0; k < kNumStates; ++k) {
      cum += sc.initial_distribution[static_cast<std::size_t>(k)];
      if (u < cum) {
        state = k;
        break;
      }
    }
    // Round-off in the cumulative sum: fall back to the last state with mass.
    if (u >= cum) {
      for (int k = kNumStates - 1; k >= 0; --k) {
        if (sc.initial_distribution[static_cast<std::size_t>(k)] > 0.0) {
          state = k;
          break;
        }
      }
    }
  }

  std::vector<RatingEvent> events{{sc.span.start, RatingState{state}}};
  const double horizon = static_cast<double>(sc.span.day_count());
  double t = 0.0;
  long last_day = 0;
  double excited_until = -std::numeric_limits<double>::infinity();
  std::size_t regime = 0;
  std::array<double, kNumStates> rates{};

  while (t < horizon) {
    while (regime + 1 < boundaries.size() && t >= boundaries[regime + 1]) ++regime;
    double next_boundary = regime + 1 < boundaries.size() ? boundaries[regime + 1] : horizon;
    const bool excited = sc.excitation && t < excited_until;
    if (excited) next_boundary = std::min(next_boundary, excited_until);

    const auto& q = sc.generators[regime].generator;
    double total = 0.0;
    for (int j = 0; j < kNumStates; ++j) {
      double r = j == state ? 0.0 : q(state, j) / kDaysPerYear;
      if (excited && j < state) r *= sc.excitation->multiplier;
      rates[static_cast<std::size_t>(j)] = r;
      total += r;
    }
    if (!(total > 0.0)) {
      t = next_boundary;
      continue;
    }
    const double hold = -std::log1p(-uniform01(rng)) / total;
    if (t + hold >= next_boundary) {
      // Memoryless restart at the boundary under the new rates.
      t = next_boundary;
      continue;
    }
    t += hold;
    const long day = static_cast<long>(std::floor(t));
    if (day == last_day) {
      // One event per day: discard the same-day jump and redraw from the next day.
      t = static_cast<double>(last_day + 1);
      continue;
    }

    const double pick = uniform01(rng) * total;
    double cum = 0.0;
    int target = -1;
    for (int j = 0; j < kNumStates; ++j) {
      if (rates[static_cast<std::size_t>(j)] <= 0.0) continue;
      cum += rates[static_cast<std::size_t>(j)];
      target = j;
      if (pick < cum) break;
    }
    if (sc.excitation && target < state) {
      excited_until = t + static_cast<double>(sc.excitation->memory_days);
    }
    state = target;
    events.push_back({sc.span.start + Days{day}, RatingState{state}});
    last_day = day;
  }
  return RatingHistory{simulated_bank_id(bank, sc.n_banks), std::move(events)};
}

}  // namespace detail

/// Draws a panel; every bank is rated from the span start and never withdrawn.
/// Each bank has its own stream seeded from (seed, bank index).
inline Panel simulate(const Scenario& scenario) {
  scenario.validate();
  std::vector<double> boundaries;
  for (const auto& r : scenario.generators) {
    boundaries.push_back(static_cast<double>((r.start - scenario.span.start).count()));
  }
  std::vector<RatingHistory> histories;
  histories.reserve(scenario.n_banks);
  for (std::size_t b = 0; b < scenario.n_banks; ++b) {
    histories.push_back(detail::simulate_bank(scenario, b, boundaries));
  }
  return Panel{scenario.span, std::move(histories)};
}

/// Parses the flat `key = value` scenario format. Relative generator file paths
/// resolve against `base_dir`.
///
/// Keys: kind, n_banks, start, end, seed, generator (random | zero | <csv path>),
/// generator_seed, rate_scale, switch_date, switch_multiplier,
/// excitation_multiplier, excitation_days, initial (uniform | <label> | 15 weights).
inline Scenario parse_scenario(std::istream& in, const std::filesystem::path& base_dir = {}) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto text = std::string_view(line);
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = detail::trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("scenario line " + std::to_string(line_no) + ": expected key = value");
    }
    kv[std::string(detail::trim(text.substr(0, eq)))] = std::string(detail::trim(text.substr(eq + 1)));
  }
  static const std::array<std::string_view, 13> known{
      "kind",          "n_banks",           "start",
      "end",           "seed",              "generator",
      "generator_seed", "rate_scale",       "switch_date",
      "switch_multiplier", "excitation_multiplier", "excitation_days",
      "initial"};
  for (const auto& [key, value] : kv) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::invalid_argument("unknown scenario key '" + key + "'");
    }
  }
  auto require = [&](const std::string& key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument("scenario is missing key '" + key + "'");
    return it->second;
  };
  auto get = [&](const std::string& key, const std::string& fallback) {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : it->second;
  };
  auto to_date = [](const std::string& key, const std::string& v) {
    const auto d = parse_date(v);
    if (!d) throw std::invalid_argument("scenario key '" + key + "' is not a YYYY-MM-DD date");
    return *d;
  };
  auto to_double = [](const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != v.size() || v.empty()) throw std::invalid_argument("scenario key '" + key + "' is not a number");
    return x;
  };
  auto to_uint = [](const std::string& key, const std::string& v) {
    std::uint64_t x = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) {
      throw std::invalid_argument("scenario key '" + key + "' is not a nonnegative integer");
    }
    return x;
  };

  Scenario sc;
  const auto& kind = get("kind", "homogeneous");
  if (kind == "homogeneous") {
    sc.kind = ScenarioKind::homogeneous;
  } else if (kind == "regime_switch") {
    sc.kind = ScenarioKind::regime_switch;
  } else if (kind == "excited") {
    sc.kind = ScenarioKind::excited;
  } else {
    throw std::invalid_argument("unknown scenario kind '" + kind + "'");
  }
  sc.n_banks = static_cast<std::size_t>(to_uint("n_banks", require("n_banks")));
  sc.span = Span{to_date("start", require("start")), to_date("end", require("end"))};
  sc.seed = to_uint("seed", get("seed", "0"));

  GeneratorMatrix base;
  const auto& gen = get("generator", "random");
  if (gen == "random") {
    base = random_generator(to_uint("generator_seed", get("generator_seed", std::to_string(sc.seed))),
                            to_double("rate_scale", get("rate_scale", "0.3")));
  } else if (gen != "zero") {
    std::filesystem::path path(gen);
    if (path.is_relative() && !base_dir.empty()) path = base_dir / path;
    std::ifstream file(path);
    if (!file) throw std::invalid_argument("cannot open generator file '" + path.string() + "'");
    base = GeneratorMatrix{read_matrix(file)};
  }
  sc.generators.push_back({sc.span.start, base});

  if (sc.kind == ScenarioKind::regime_switch) {
    const double factor = to_double("switch_multiplier", get("switch_multiplier", "3"));
    if (!(factor >= 0.0)) throw std::invalid_argument("switch_multiplier must be nonnegative");
    sc.generators.push_back(
        {to_date("switch_date", require("switch_date")), GeneratorMatrix{base.rates() * factor}});
  }
  if (sc.kind == ScenarioKind::excited) {
    sc.excitation = Excitation{
        to_double("excitation_multiplier", get("excitation_multiplier", "5")),
        static_cast<int>(to_uint("excitation_days", get("excitation_days", "90")))};
  }

  const auto& initial = get("initial", "uniform");
  if (initial == "uniform") {
    sc.initial_distribution.fill(1.0 / kNumStates);
    // Make the weights sum to one exactly enough for validation.
    double rest = 1.0;
    for (int k = 0; k + 1 < kNumStates; ++k) rest -= sc.initial_distribution[static_cast<std::size_t>(k)];
    sc.initial_distribution.back() = rest;
  } else if (const auto s = RatingScale::encode(initial)) {
    sc.initial_distribution.fill(0.0);
    sc.initial_distribution[static_cast<std::size_t>(s->index())] = 1.0;
  } else {
    const auto fields = detail::split_fields(initial);
    if (fields.size() != kNumStates) {
      throw std::invalid_argument("initial must be 'uniform', a rating label, or 15 weights");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < fields.size(); ++k) {
      sc.initial_distribution[k] = to_double("initial", std::string(fields[k]));
      total += sc.initial_distribution[k];
    }
    if (!(total > 0.0)) throw std::invalid_argument("initial weights must have positive total");
    for (auto& p : sc.initial_distribution) p /= total;
  }
  sc.validate();
  return sc;
}

}  // namespace ratingmc
