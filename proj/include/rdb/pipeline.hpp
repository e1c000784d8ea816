#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "rdb/config.hpp"
#include "rdb/report.hpp"

namespace rdb {

enum ExitCode : int { kExitPass = 0, kExitCheckFailure = 1, kExitUsage = 2, kExitInstability = 3 };

struct Outcome {
  Report report;
  int exit_code = kExitPass;
};

struct RunOptions {
  std::filesystem::path out = "report";
  bool skip_validate = false;
};

/// Validation, simulation and every enabled diagnostic. Writes summary.txt,
/// report.json and the CSV artifacts into options.out.
Outcome run_pipeline(const RunConfig& config, const RunOptions& options);

/// Validation and simulation only; stores each species and reaction term as a
/// binary snapshot, plus per-frame CSV when the record is small.
Outcome simulate_command(const RunConfig& config, const RunOptions& options);

/// Held-out bound checks for g, K, P and A at the reference grid sizes.
Outcome verify_kernels_command(const RunConfig& config, const RunOptions& options);

/// L2 bound, PDE/J agreement and Hoelder stability on random forcings drawn
/// with the config seed on the config grid and time lattice.
Outcome verify_operator_command(const RunConfig& config, const RunOptions& options);

/// Seminorm of a stored field over the standard family.
Outcome bmo_report_command(const std::filesystem::path& input, double order, double t_min, const RunOptions& options);

/// Unit-cylinder moments of a stored product field, or of a fresh run of the config.
Outcome moment_report_command(const RunConfig& config, const std::optional<std::filesystem::path>& input,
                              const RunOptions& options);

/// Acceptance criteria (all when `ids` is empty).
Outcome full_acceptance_command(const std::vector<int>& ids, std::uint64_t seed, const RunOptions& options);

}  // namespace rdb
