#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rdb/grid.hpp"
#include "rdb/solver.hpp"
#include "rdb/systems.hpp"

namespace rdb {

struct DiagnosticsConfig {
  bool timeline = true;
  bool duhamel = false;
  bool decomposition = false;
  bool goodbad = false;
  bool bmo = false;
  bool moments = false;
  bool jn = false;
  bool operator_checks = false;

  std::vector<int> goodbad_m{1, 2, 4, 8};
  /// Empty selects the stored frames nearest T/8, T/2 and T.
  std::vector<double> goodbad_times;
  /// Weights of exp(Z.V); empty means all ones.
  std::vector<double> moment_weights;
  /// rho < 1 switches to the sub-exponential moment exp(r v^rho) of the first product.
  double moment_r = 1.0;
  double moment_rho = 1.0;
  int moment_count = 20;
};

/// Every threshold used by the run pipeline. All must be positive.
struct ToleranceConfig {
  double max_principle = 1e-8;
  double positivity = 1e-8;
  double reconstruction = 1e-3;
  double decomposition = 1e-4;
  double stoichiometric = 1e-8;
  double goodbad = 1e-3;
  double l2 = 1e-6;
  double operator_agreement = 1e-3;  ///< relative to sup |Phi|
  double plateau = 0.05;
  double drift = 0.10;
  double jn_r_squared = 0.9;

  void scale(double factor);
};

struct RunConfig {
  std::string model = "combustion-exp";
  ModelParameters params;
  /// Expression models: one entry per fuel / product.
  std::vector<std::string> consumption;
  std::vector<std::string> production;
  /// Overrides of the model constants; empty keeps the builtin values.
  std::vector<std::vector<double>> stoichiometry;
  std::vector<std::vector<double>> growth_rates;
  double growth_constant = -1.0;
  double subexp_order = -1.0;

  int dim = 1;
  double length = 40.0;
  int points = 256;
  std::vector<double> fuel_diffusivity;     ///< empty keeps the model value
  std::vector<double> product_diffusivity;

  SimulationOptions simulation{.horizon = 1.0, .dt = 1e-3, .stride = 1, .on_failure = BlowUpPolicy::Stop};
  InitialSpec init;

  DiagnosticsConfig diagnostics;
  ToleranceConfig tolerance;
  DomainBox box;
  int validation_samples = 4096;
  std::uint64_t seed = 1;

  Grid grid() const;
  SystemSpec system() const;
};

/// Flat `key = value` lines with dotted keys; `#` starts a comment. Lists are
/// comma separated and matrix rows are separated by `;`. Unknown keys, bad values
/// and a missing file are config-parse errors.
RunConfig parse_config(std::string_view text, std::string_view origin = "<text>");
RunConfig load_config(const std::filesystem::path& path);

/// Keys accepted by parse_config.
std::vector<std::string> config_keys();

}  // namespace rdb
