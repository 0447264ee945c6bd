#pragma once

// Self-check suites.  The fast suite runs exact oracles and cheap property
// checks in under a minute; the full suite runs the twelve-point statistical
// acceptance checklist with every tolerance pinned here in code.  Both print
// nothing; callers format the results.

#include <string>
#include <vector>

namespace kpz {

struct CriterionResult {
  std::string id;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct SuiteResult {
  std::vector<CriterionResult> results;
  bool all_pass() const;
};

SuiteResult run_fast_suite(int workers = 1);
SuiteResult run_full_suite(int workers = 1);

}  // namespace kpz
