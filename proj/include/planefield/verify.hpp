#pragma once

#include <optional>
#include <string>
#include <vector>

#include "planefield/report_io.hpp"

namespace planefield {

struct Expectation {
  enum class Kind { AtMost, AtLeast, Equals, Classification, NotClassification, Report };
  Kind kind = Kind::AtMost;
  /// Bound for at_least, target for equals (at_most uses the tolerance).
  double value = 0.0;
  /// Classification name for the classification kinds.
  std::string label;
};

struct CheckSpec {
  std::string name;
  /// "builtin:<model>" or a chart-file path; empty for model-free operations.
  std::string target;
  std::string operation;
  Json params = Json::object();
  std::optional<GridCounts> grid;
  /// Bound for at_most, slack for equals, parabolic tolerance for
  /// classification checks. Must be > 0.
  double tolerance = 0.0;
  Expectation expectation;
};

struct SuiteSpec {
  std::string suite;
  std::vector<CheckSpec> checks;
};

struct CheckResult {
  std::string name;
  std::string operation;
  std::string target;
  bool passed = false;
  std::optional<double> measured;
  std::optional<std::string> classification;
  double tolerance = 0.0;
  Expectation expectation;
  std::optional<std::string> error_kind;
  std::string error_message;
  Json details = Json::object();
  double seconds = 0.0;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool passed = true;
  std::string note;
};

struct SuiteOptions {
  int jobs = 1;
};

/// Operation names accepted in a suite.
const std::vector<std::string>& suite_operations();

/// Validates and converts a suite document; ConfigError when malformed
/// (unknown operation, tolerance <= 0, bad expectation).
SuiteSpec parse_suite(const Json& doc);
SuiteSpec load_suite(const std::string& path);

/// Runs every check in order. Errors inside a check are recorded as that
/// check's failure; the suite itself never aborts.
SuiteReport run_suite(const SuiteSpec& spec, const SuiteOptions& options = {});

/// Deterministic report body; wall times go under "timings" only if asked.
Json suite_report_to_json(const SuiteReport& report, bool include_timings);

const std::vector<std::string>& builtin_suite_names();
/// ConfigError for unknown names.
SuiteSpec builtin_suite(const std::string& name);
/// The suite document behind builtin_suite (parseable by parse_suite).
Json builtin_suite_json(const std::string& name);

}  // namespace planefield
