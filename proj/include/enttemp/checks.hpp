#pragma once

#include <string>
#include <vector>

#include "json.hpp"

// Named oracle checks exposed through the CLI.
namespace enttemp::checks {

struct CheckResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  nlohmann::json expected;  // number or [lo, hi]
  double tolerance = 0.0;
  bool informational = false;  // reported only; never fails the suite
  std::string note;
};

std::vector<std::string> suite_names();

/// Runs one suite; throws InvalidInput for unknown names.
std::vector<CheckResult> run_suite(const std::string& name);

nlohmann::json to_json(const std::string& suite, const std::vector<CheckResult>& results);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace enttemp::checks
