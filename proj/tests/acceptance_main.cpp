// Acceptance gate runner: one pass/fail line per criterion, nonzero exit on
// any failure.

#include <cstdio>

#include "sparselab/acceptance.hpp"

int main() {
  const auto results = sparselab::run_acceptance();
  int passed = 0;
  for (const auto& r : results) {
    std::printf("%s  %-22s %7.2fs  %s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.seconds,
                r.detail.c_str());
    if (r.pass) ++passed;
  }
  std::printf("ACCEPTANCE: %d/%zu criteria passed\n", passed, results.size());
  return sparselab::all_passed(results) ? 0 : 1;
}
