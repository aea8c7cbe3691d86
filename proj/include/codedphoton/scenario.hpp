#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace codedphoton {

/// Every parameter the command-line front-end understands. Physical
/// quantities are in units of gamma (rates) and 1/gamma (times).
struct ScenarioConfig {
  std::string preset;  ///< fig2 ... fig7, figD or empty
  double gamma = 1.0;
  double w_over_gamma = 1.5;
  std::size_t n0 = 31;
  /// "random" or an explicit comma-separated list of chip phases (rad).
  std::string code = "random";
  std::uint64_t seed = 1;
  double beta = 1.0;
  double delta_over_gamma = 0.0;
  std::size_t trials = 200;
  std::vector<std::size_t> n0_list;
  std::size_t users = 2;
  double sigma_phi = 0.0;
  double flip_probability = 0.0;
  /// Grid overrides; 0 keeps the defaults.
  double dt = 0.0;
  double t_min = 0.0;
  double t_max = 0.0;
  unsigned workers = 0;

  void validate() const;
  /// Flat `key = value` text, one entry per line, in a fixed order.
  [[nodiscard]] std::string to_text() const;
};

/// Parses a flat key-value file (TOML-compatible subset: `key = value`,
/// `#` comments, quoted strings, `[a, b, c]` integer lists).
std::map<std::string, std::string> parse_key_values(const std::string& text);

/// Applies parsed key-values to a config; unknown keys are rejected.
void apply_key_values(ScenarioConfig& config, const std::map<std::string, std::string>& values);

ScenarioConfig load_config(const std::filesystem::path& path);

struct RunOptions {
  std::filesystem::path out_dir;
  bool force = false;
  bool gnuplot = false;
};

/// Result of one subcommand: files written plus headline scalars.
struct RunRecord {
  std::string command;
  ScenarioConfig config;
  std::vector<std::string> outputs;
  std::map<std::string, double> summary;
  std::string version;
};

/// Subcommands: excite, intensity, sweep-codelength, opt-bandwidth, budget,
/// crosstalk, figures. Creates the run directory, writes config.txt,
/// summary.json and the data files, and prints a short report to `log`.
RunRecord run_command(const std::string& command, ScenarioConfig config, const RunOptions& options, std::ostream& log);

std::vector<std::string> command_names();

}  // namespace codedphoton
