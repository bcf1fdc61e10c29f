// One line per acceptance criterion; nonzero exit if any fails.
#include "mcmullen/acceptance.hpp"

#include <cstdio>

int main() {
  int failed = 0;
  mcm::run_acceptance({}, [&](const mcm::AcceptanceRow& r) {
    std::printf("[%s] %2d %-24s %6.1fs  %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                r.detail.c_str());
    std::fflush(stdout);
    failed += !r.pass;
  });
  std::printf("%d of %d criteria passed\n", mcm::kAcceptanceCount - failed, mcm::kAcceptanceCount);
  return failed ? 1 : 0;
}
