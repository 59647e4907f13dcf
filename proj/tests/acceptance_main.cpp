// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <cstdio>
#include <string>

#include "modalgrid/verify.hpp"

using namespace modalgrid;

namespace {

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s — %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  if (!ok) ++failures;
}

std::string summary(const SuiteReport& r) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%ld cases, %zu failures, %.2f s", r.cases_run,
                r.failures.size(), r.wall_seconds);
  return buf;
}

void criterion_suite(const std::string& name, const std::string& suite, double time_target_s,
                     long min_cases = 0) {
  SuiteReport r = run_suite(suite);
  bool ok = r.failures.empty();
  std::string detail = summary(r);
  if (time_target_s > 0) {
    ok = ok && r.wall_seconds < time_target_s;
    detail += " (target < " + std::to_string(static_cast<int>(time_target_s)) + " s)";
  }
  if (min_cases > 0) {
    ok = ok && r.cases_run >= min_cases;
    detail += " (required >= " + std::to_string(min_cases) + " cases)";
  }
  if (!r.failures.empty()) detail += " | first: " + r.failures.front().description;
  report(name, ok, detail);
}

}  // namespace

int main() {
  criterion_suite("lemma3 structural properties of quotients", "lemma3", 30.0);
  criterion_suite("lemma4 quotient invariance of satisfaction", "lemma4", 60.0);
  criterion_suite("lemma5 respect and counter distances", "lemma5", 0.0, 50);
  criterion_suite("torus models satisfy the reduction (forward)", "thm6-forward", 300.0);
  criterion_suite("universal-world round-trip", "thm8-roundtrip", 0.0);
  criterion_suite("search soundness, controls and enumerator agreement", "oracle", 0.0);
  criterion_suite("subframe preservation of basic kernels", "subframe", 0.0);

  std::printf("%d of 7 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
