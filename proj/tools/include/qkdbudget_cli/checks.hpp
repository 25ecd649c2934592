#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qkdbudget_cli/config.hpp"

namespace qkdbudget::cli {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Closed forms against the series oracle, regime thresholds and boundaries.
std::vector<CheckResult> oracle_checks();

// Monte Carlo tallies against the analytic counts for `seeds` independent
// streams of cfg.validate.pulses pulses each.
std::vector<CheckResult> monte_carlo_checks(const ScenarioConfig& cfg, int seeds);

}  // namespace qkdbudget::cli
