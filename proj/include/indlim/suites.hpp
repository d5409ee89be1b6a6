#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "indlim/errors.hpp"

namespace indlim {

enum class ScalarMode { Auto, Rational, Float };
enum class OutputFormat { Text, Json };

std::string to_string(ScalarMode mode);
std::string to_string(OutputFormat format);
ScalarMode parse_mode(const std::string& text);        // throws ConfigInvalid
OutputFormat parse_format(const std::string& text);    // throws ConfigInvalid
void parse_dims(const std::string& text, int& lo, int& hi);  // "2..12"

struct SuiteConfig {
  std::string tower = "sphere";
  std::string suite = "all";
  int dim_min = 2;
  int dim_max = 12;
  int trials = 500;
  std::uint64_t seed = 0;
  double tol = 1e-9;
  ScalarMode mode = ScalarMode::Auto;
  OutputFormat format = OutputFormat::Text;
};

struct CheckResult {
  std::string id;
  int trials = 0;
  int failures = 0;
  std::optional<double> max_residual;          // absent for exact-mode checks
  std::optional<std::string> counterexample;   // first failing sample, if any
};

struct SuiteReport {
  std::string suite;
  SuiteConfig config;
  std::vector<CheckResult> checks;
  bool pass = false;
  double duration_ms = 0.0;
};

/// Throws UnknownSuite / UnknownTower / ConfigInvalid.
void validate_config(const SuiteConfig& config);

/// Runs the named suite (or all of them). Deterministic for a fixed config
/// up to duration_ms: trial k of a suite draws from
/// splitmix(master seed, suite id, k).
SuiteReport run_suite(const SuiteConfig& config);

/// Serialized report with the stable field order
/// {suite, config, checks:[{id, trials, failures, max_residual,
/// counterexample}], pass, duration_ms}.
std::string report_to_json(const SuiteReport& report);
std::string report_to_text(const SuiteReport& report);

std::vector<std::pair<std::string, std::string>> list_suites();

}  // namespace indlim
