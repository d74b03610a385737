#pragma once

#include <functional>
#include <string>
#include <vector>

#include "arteria/multipliers.hpp"

namespace arteria {

enum class CheckStatus { pass, fail, skip };

struct CheckResult {
  std::string name;
  CheckStatus status;
  std::string detail;
};

struct SelftestOptions {
  ModelParams params;
  /// Applied to every multiplier table the checks build; lets tests inject a
  /// corrupted symbol and confirm the matching check fails.
  std::function<void(MultiplierTable&)> table_hook;
};

/// Operator identities, oracle equivalences, mean conservation and a BBM
/// decay smoke run.
std::vector<CheckResult> run_selftest(const SelftestOptions& options = {});

bool selftest_passed(const std::vector<CheckResult>& results);
std::string format_report(const std::vector<CheckResult>& results);

}  // namespace arteria
