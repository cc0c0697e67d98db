// One line per acceptance criterion; exit status 1 if any criterion fails.
#include "cinfer/paper_checks.hpp"

#include <cstdio>
#include <iostream>

int main() {
  cinfer::PaperChecks checks;
  int failed = 0;
  for (int k = 1; k <= 12; ++k) {
    const auto r = checks.run(k);
    std::printf("[%s] criterion %2d  %-27s %8.3f s  %s\n", r.ok ? "PASS" : "FAIL", r.number, r.name.c_str(),
                r.seconds, r.detail.c_str());
    std::fflush(stdout);
    failed += r.ok ? 0 : 1;
  }
  std::printf("%d/12 criteria passed\n", 12 - failed);
  return failed == 0 ? 0 : 1;
}
