// Acceptance gate: runs every verification criterion and prints one
// pass/fail line per row. Exits with the number of failing rows.

#include <cstdio>

#include "fgopt/acceptance.hpp"

int main() {
  auto rows = fgopt::run_acceptance_suite("all");
  int failures = 0;
  for (const auto& r : rows) {
    if (!r.pass) ++failures;
    std::printf("[%s] %-32s measured=%-12.6g bound=%-12.6g %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                r.measured, r.bound, r.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(rows.size()) - failures, rows.size());
  return failures;
}
