// Acceptance run: one line per criterion, non-zero exit if any fails.
// Usage: qfree_acceptance [scenario_dir] [criterion ids...]
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "qfree/selftest.hpp"

int main(int argc, char** argv) {
  qfree::SelftestOptions opt;
  opt.scenario_dir = argc > 1 ? argv[1] : QFREE_SCENARIO_DIR;
  std::vector<int> ids;
  for (int a = 2; a < argc; ++a) ids.push_back(std::atoi(argv[a]));
  if (ids.empty())
    for (int id = 1; id <= qfree::kCriterionCount; ++id) ids.push_back(id);

  int failed = 0;
  double total = 0;
  for (int id : ids) {
    auto r = qfree::run_criterion(id, opt);
    total += r.seconds;
    if (!r.pass) ++failed;
    std::printf("[%s] criterion %2d  %-45s %8.2f s  %s\n", r.pass ? "PASS" : "FAIL", r.id, r.title.c_str(), r.seconds,
                r.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed, %.1f s total\n", ids.size(), failed, total);
  return failed == 0 ? 0 : 1;
}
