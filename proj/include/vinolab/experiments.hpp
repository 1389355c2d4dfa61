#pragma once

// Experiment configurations, sweeps and the verification suite. Every
// command produces CSV or JSON text; counts are decimal strings and reals
// carry 12 significant digits.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vinolab/counting.hpp"

namespace vinolab {

enum class Command { kCount, kMoment, kDftCheck, kExpsum, kCongruence, kSingular, kWaring, kTarry, kBounds, kVerify };

std::string to_string(Command c);
std::optional<Command> command_from_string(const std::string& name);

struct ExperimentConfig {
  std::string name = "experiment";
  Command command = Command::kCount;
  /// Command-specific keys, e.g. {"E": [1, 2], "s": 2, "X": 5}.
  nlohmann::json parameters = nlohmann::json::object();
  /// Empty means standard output only.
  std::string output_path;
  unsigned threads = 1;
  std::uint64_t budget_bytes = std::uint64_t{4} << 30;

  /// Top-level keys other than name, command, output_path, threads and
  /// budget_bytes are parameters, as are the members of a "parameters"
  /// object. Throws ConfigInvalid.
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig from_file(const std::string& path);
  nlohmann::json to_json() const;

  /// Checks the command's required keys and threads >= 1.
  void validate() const;
  EngineOptions engine() const;
};

struct RunResult {
  /// "csv" or "json".
  std::string format;
  std::string text;
  /// Failed assertions; nonempty means exit status 1.
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

/// Executes the command. Throws ConfigInvalid for bad parameters; a
/// BudgetExceeded is rethrown with the offending parameters in its message.
RunResult run_config(const ExperimentConfig& config);

/// run_config, then writes the text to output_path when one is set.
RunResult run_and_write(const ExperimentConfig& config);

/// One run per value of `variable`. Rows are concatenated under a single
/// header; failed rows become `# error,...` comment lines. A sweep of X for
/// the count or moment commands ends with a `# slope,...` line holding the
/// least-squares slope of log J against log X.
RunResult sweep(const ExperimentConfig& base, const std::string& variable, const std::vector<nlohmann::json>& values);

/// Ordinary least squares slope of log y against log x.
double log_log_slope(const std::vector<double>& x, const std::vector<Count>& y);

enum class VerifyLevel { kQuick, kFull };

struct VerifyEntry {
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0;
};

struct VerifyReport {
  std::vector<VerifyEntry> entries;

  bool all_pass() const;
  /// `name,pass,detail,seconds` with a comment line first.
  std::string to_csv() const;
};

/// Quick runs the exact-equality invariants. Full adds the J_{7,2} sweep to
/// X = 512 (written to output_dir/sweep_j72.csv when output_dir is set), the
/// Waring run at n = 10^6 and the cubic congruence enumeration.
VerifyReport verify_suite(VerifyLevel level, const EngineOptions& options = {}, const std::string& output_dir = "");

}  // namespace vinolab
