// Statistical acceptance checklist.  Runs the full verification suite and
// prints one pass/fail line per criterion; exits nonzero if any fails.
// Budget roughly twenty minutes on one core.

#include <cstdio>

#include "kpz/verify.hpp"

int main() {
  const kpz::SuiteResult suite = kpz::run_full_suite(1);
  for (const kpz::CriterionResult& r : suite.results)
    std::printf("%-24s %s  %8.2fs  %s\n", r.id.c_str(),
                r.pass ? "PASS" : "FAIL", r.seconds, r.detail.c_str());
  std::printf("acceptance: %s (%zu criteria)\n",
              suite.all_pass() ? "PASS" : "FAIL", suite.results.size());
  return suite.all_pass() ? 0 : 1;
}
