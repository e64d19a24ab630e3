#pragma once

#include <string>
#include <vector>

#include "kleinweyl/config.hpp"

namespace kleinweyl::harness {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitNumerical = 3,
  kExitTolerance = 4,
};

/// One compared quantity. `passed` is |value - expected| <= tolerance, or the
/// relative form when `relative` is set.
struct Check {
  std::string name;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool relative = false;
  bool passed = false;
  std::string note;
};

/// Flat table written to <suite>.csv.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct SuiteResult {
  std::string name;
  bool skipped = false;
  std::string skip_reason;
  /// Non-empty when the suite threw; `error_code` is then 2 or 3.
  std::string error;
  int error_code = kExitOk;
  double seconds = 0.0;
  std::vector<Check> checks;
  Table table;

  bool passed() const;
};

struct RunReport {
  RunConfig config;
  std::vector<SuiteResult> suites;  ///< in the order of config.suites
  int exit_code = kExitOk;
  std::string first_failing_suite;
};

/// Shortest decimal string with 17 significant digits ("nan", "inf" as is).
std::string format_number(double value);

/// Runs the configured suites without touching the file system. Independent
/// suites run concurrently up to thread_limit() workers.
RunReport run_suites(const RunConfig& config);

/// report.json, one CSV per suite and summary.txt under `directory`.
void write_artifacts(const RunReport& report, const std::string& directory);

/// Human-readable table of every check.
std::string summary_text(const RunReport& report);

/// run_suites followed by write_artifacts into config.output_dir.
int run_report(const RunConfig& config);

}  // namespace kleinweyl::harness
