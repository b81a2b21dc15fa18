#pragma once

// The acceptance battery: one aggregated pass/fail result per criterion, each
// carrying the measured statistics and the tolerance it was held to.

#include <functional>
#include <string>
#include <vector>

namespace ness {

struct CheckResult {
  int criterion = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

struct AcceptanceOptions {
  /// Fewer parameter points per criterion; tolerances are unchanged.
  bool fast = false;
};

inline constexpr int kCriterionCount = 10;

/// Runs a single criterion (1..10). Exceptions inside a check are reported
/// as a failure with the message in `detail`.
CheckResult run_criterion(int criterion, const AcceptanceOptions& opt = {});

/// All criteria in order; `on_result` is called as each finishes.
std::vector<CheckResult> run_acceptance(const AcceptanceOptions& opt = {},
                                        const std::function<void(const CheckResult&)>& on_result = {});

/// "PASS [3] name: detail" style line.
std::string format_result(const CheckResult& r);

}  // namespace ness
