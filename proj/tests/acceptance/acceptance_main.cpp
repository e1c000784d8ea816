// Acceptance gate: one PASS/FAIL line per criterion, exit 0 iff all selected pass.

#include <CLI11.hpp>
#include <cstdio>
#include <vector>

#include "rdb/acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> ids;
  std::uint64_t seed = 1;
  bool verbose = false;
  app.add_option("-c,--criterion", ids, "Criterion numbers to run (default: all)")
      ->check(CLI::Range(1, rdb::kCriterionCount));
  app.add_option("--seed", seed, "Seed for the random draws");
  app.add_flag("-v,--verbose", verbose, "Print every check, not only failing ones");
  CLI11_PARSE(app, argc, argv);
  if (ids.empty())
    for (int k = 1; k <= rdb::kCriterionCount; ++k) ids.push_back(k);

  bool all = true;
  for (int id : ids) {
    const rdb::CriterionResult r = rdb::run_criterion(id, seed);
    std::printf("%s\n", r.line().c_str());
    for (const auto& c : r.checks)
      if (verbose || !c.passed) std::printf("    %s\n", rdb::format_check(c).c_str());
    std::fflush(stdout);
    all = all && r.passed();
  }
  return all ? 0 : 1;
}
