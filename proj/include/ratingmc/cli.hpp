#pragma once

// Command-line surface: counts, moments, homogeneity, ck, simulate.
// Commands only wire library calls to files; all numbers come from the library.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ratingmc/assumption_tests.hpp"
#include "ratingmc/core_model.hpp"
#include "ratingmc/descriptive_stats.hpp"
#include "ratingmc/ingest.hpp"
#include "ratingmc/simulator.hpp"

namespace ratingmc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

struct RunConfig {
  std::string input;
  std::string output;
  std::string from;
  std::string to;
  int tau = 365;
  std::string window = "year";
  std::string scenario;
  std::optional<std::uint64_t> seed;
};

namespace detail {

/// Raised for problems with the user's data or files; maps to exit code 2.
struct CommandError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::optional<Date> optional_date(const std::string& text, const char* flag) {
  if (text.empty()) return std::nullopt;
  const auto d = parse_date(text);
  if (!d) throw CommandError(std::string(flag) + " expects YYYY-MM-DD, got '" + text + "'");
  return d;
}

inline Panel load_panel(const RunConfig& cfg) {
  std::ifstream in(cfg.input);
  if (!in) throw CommandError("cannot open input file '" + cfg.input + "'");
  std::vector<RawRecord> records;
  try {
    records = read_records(in);
  } catch (const DataError& e) {
    throw CommandError(cfg.input + ": " + e.what());
  }
  const auto from = optional_date(cfg.from, "--from");
  const auto to = optional_date(cfg.to, "--to");
  Span span = infer_span(records);
  if (from) span.start = *from;
  if (to) span.end = *to;
  if ((from || to) && span.empty()) throw CommandError("--from must not be after --to");
  try {
    return build_panel(std::move(records), span);
  } catch (const DataError& e) {
    throw CommandError(cfg.input + ": " + e.what());
  }
}

inline void write_output(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw CommandError("cannot open output file '" + path + "'");
  file << content;
  if (!file) throw CommandError("failed writing output file '" + path + "'");
}

inline WindowLength parse_window(const std::string& w) {
  return w == "month" ? WindowLength::month : WindowLength::year;
}

}  // namespace detail

/// Writes `<output>_n_rated.csv` and `<output>_transitions_per_bank.csv`.
inline void cmd_counts(const RunConfig& cfg, std::ostream& out) {
  const Panel panel = detail::load_panel(cfg);
  std::ostringstream n_rated;
  write_series(n_rated, daily_counts(panel));
  std::ostringstream per_bank;
  write_series(per_bank, transitions_per_bank(panel, 365));
  detail::write_output(cfg.output + "_n_rated.csv", n_rated.str(), out);
  detail::write_output(cfg.output + "_transitions_per_bank.csv", per_bank.str(), out);
}

inline void cmd_moments(const RunConfig& cfg, std::ostream& out) {
  const Panel panel = detail::load_panel(cfg);
  std::ostringstream text;
  write_moment_series(text, moment_series(panel, Days{cfg.tau}));
  detail::write_output(cfg.output, text.str(), out);
}

inline void cmd_test_series(const RunConfig& cfg, Statistic statistic, std::ostream& out) {
  const Panel panel = detail::load_panel(cfg);
  std::ostringstream text;
  write_test_series(text, rolling_series(panel, statistic, detail::parse_window(cfg.window)));
  detail::write_output(cfg.output, text.str(), out);
}

inline void cmd_homogeneity(const RunConfig& cfg, std::ostream& out) {
  cmd_test_series(cfg, Statistic::homogeneity, out);
}

inline void cmd_ck(const RunConfig& cfg, std::ostream& out) {
  cmd_test_series(cfg, Statistic::ck_l2, out);
}

inline void cmd_simulate(const RunConfig& cfg, std::ostream& out) {
  std::ifstream in(cfg.scenario);
  if (!in) throw detail::CommandError("cannot open scenario file '" + cfg.scenario + "'");
  Scenario scenario;
  try {
    scenario = parse_scenario(in, std::filesystem::path(cfg.scenario).parent_path());
  } catch (const std::invalid_argument& e) {
    throw detail::CommandError(cfg.scenario + ": " + e.what());
  }
  if (cfg.seed) scenario.seed = *cfg.seed;
  std::ostringstream text;
  write_panel(text, simulate(scenario));
  detail::write_output(cfg.output, text.str(), out);
}

/// Entry point shared by the executable and the in-process tests.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Rating-migration generators and time-homogeneity / Markov diagnostics", "ratingmc"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "Event CSV (bank_id,date,rating)")->required();
    sub->add_option("--from", cfg.from, "Span start YYYY-MM-DD (default: first date in input)");
    sub->add_option("--to", cfg.to, "Span end YYYY-MM-DD (default: last date in input)");
  };

  auto* counts = app.add_subcommand("counts", "Daily N_R and yearly transitions per bank");
  add_input(counts);
  counts->add_option("--output", cfg.output, "Output prefix")->required();

  auto* mom = app.add_subcommand("moments", "Monthly moments of R and T");
  add_input(mom);
  mom->add_option("--output", cfg.output, "Output CSV (default: stdout)");
  mom->add_option("--tau", cfg.tau, "Increment horizon in days")->check(CLI::PositiveNumber);

  std::vector<CLI::App*> test_cmds;
  for (const char* name : {"homogeneity", "ck"}) {
    auto* sub = app.add_subcommand(name, std::string(name) == "ck"
                                             ? "Rolling Chapman-Kolmogorov L2 deviation"
                                             : "Rolling time-homogeneity log-likelihood statistic");
    add_input(sub);
    sub->add_option("--output", cfg.output, "Output CSV (default: stdout)");
    sub->add_option("--window", cfg.window, "Window length")
        ->check(CLI::IsMember({"month", "year"}));
    test_cmds.push_back(sub);
  }

  auto* sim = app.add_subcommand("simulate", "Simulate a panel from a scenario file");
  sim->add_option("--scenario", cfg.scenario, "Scenario key-value file")->required();
  sim->add_option("--output", cfg.output, "Output CSV (default: stdout)");
  sim->add_option("--seed", cfg.seed, "Override the scenario seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (counts->parsed()) {
      cmd_counts(cfg, out);
    } else if (mom->parsed()) {
      cmd_moments(cfg, out);
    } else if (test_cmds[0]->parsed()) {
      cmd_homogeneity(cfg, out);
    } else if (test_cmds[1]->parsed()) {
      cmd_ck(cfg, out);
    } else if (sim->parsed()) {
      cmd_simulate(cfg, out);
    }
  } catch (const detail::CommandError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace ratingmc::cli
