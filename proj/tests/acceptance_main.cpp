#include <cstdio>

#include "fhsc/acceptance.hpp"

int main() {
  auto results = fhsc::accept::run_acceptance(
      0x5eedULL, [](const fhsc::accept::CriterionResult& r) {
        std::printf("criterion %2d [%s]: %s  %s\n", r.index, r.name.c_str(),
                    r.passed ? "PASS" : "FAIL", r.detail.c_str());
        std::fflush(stdout);
      });
  int failed = 0;
  for (const auto& r : results)
    if (!r.passed) ++failed;
  if (failed == 0)
    std::printf("acceptance: all %zu criteria passed\n", results.size());
  else
    std::printf("acceptance: %d of %zu criteria FAILED\n", failed,
                results.size());
  return failed == 0 ? 0 : 1;
}
