#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rdb/report.hpp"

namespace rdb {

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<CheckResult> checks;
  double seconds = 0.0;

  bool passed() const;
  /// "criterion 7 PASS <title> (n/m checks, 1.2 s)".
  std::string line() const;
};

inline constexpr int kCriterionCount = 12;

std::string criterion_title(int id);

/// Runtime budget in seconds; exceeding it fails the criterion.
double criterion_budget(int id);

/// Runs one acceptance criterion. Thresholds are fixed; only the seed of the
/// random draws can be changed. Errors thrown by the library become failed checks.
CriterionResult run_criterion(int id, std::uint64_t seed = 1);

/// Held-out bound checks for K (closed form) and the fractional kernels P and A
/// on the given 1D and 2D grid sizes, for every order in `orders`.
std::vector<CheckResult> kernel_bound_suite(const std::vector<double>& orders, int points_1d, int points_2d,
                                            std::uint64_t seed);

}  // namespace rdb
