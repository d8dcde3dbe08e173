#pragma once

#include <functional>
#include <string>
#include <vector>

namespace dmt::validation {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string measured;
};

struct SuiteOptions {
  bool fast = false;  ///< skip the 10^6 and 10^7 sample checks
  int workers = 1;
};

/// Runs the invariant checks of every module. `on_result` fires as each check
/// finishes so long runs can stream output.
std::vector<CheckResult> run_suite(const SuiteOptions& opts,
                                   const std::function<void(const CheckResult&)>& on_result = {});

/// "PASS <name>: <measured>" or "FAIL ...".
std::string format_line(const CheckResult& c);

}  // namespace dmt::validation
