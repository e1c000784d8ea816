#include "rdb/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>

#include "rdb/error.hpp"
#include "rdb/pipeline.hpp"

namespace rdb {

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool skip_validate = false;
  double tolerance_scale = 1.0;
};

std::filesystem::path output_dir(const Flags& f) {
  if (!f.out.empty()) return f.out;
  if (const char* env = std::getenv("REPORT_DIR"); env && *env) return env;
  return "report";
}

RunConfig load(const Flags& f) {
  RunConfig c = f.config.empty() ? parse_config("", "<defaults>") : load_config(f.config);
  if (f.seed) {
    c.seed = *f.seed;
    c.init.seed = *f.seed;
  }
  c.tolerance.scale(f.tolerance_scale);
  return c;
}

int finish(const Outcome& o, const std::filesystem::path& dir) {
  std::cout << summary_text(o.report) << "report written to " << dir.string() << "\n";
  return o.exit_code;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Reaction-diffusion boundedness harness"};
  app.require_subcommand(1);
  Flags flags;
  auto common = [&flags](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", flags.config, "Config file (flat dotted key = value)");
    if (needs_config) opt->required();
    cmd->add_option("--seed", flags.seed, "Seed overriding the config");
    cmd->add_option("--out", flags.out, "Report directory (default: $REPORT_DIR or ./report)");
    cmd->add_flag("--skip-validate", flags.skip_validate, "Run even if the assumption validator rejects the model");
    cmd->add_option("--tolerance-scale", flags.tolerance_scale, "Multiply every run tolerance by this factor")
        ->check(CLI::PositiveNumber);
  };

  auto* run = app.add_subcommand("run", "Validate, simulate and run the enabled diagnostics");
  common(run, true);
  auto* sim = app.add_subcommand("simulate", "Validate and simulate; store snapshots");
  common(sim, true);
  auto* kernels = app.add_subcommand("verify-kernels", "Held-out bound checks for the kernels");
  common(kernels, false);
  auto* op = app.add_subcommand("verify-operator", "L2, cross-method and Hoelder checks for T");
  common(op, false);
  auto* bmo = app.add_subcommand("bmo-report", "Seminorm of a stored field");
  common(bmo, false);
  std::string input;
  double order = 1.0, t_min = 1.0;
  bmo->add_option("--input", input, "Trajectory snapshot file")->required()->check(CLI::ExistingFile);
  bmo->add_option("--order", order, "Cylinder order s in (0, 1]")->check(CLI::Range(1e-6, 1.0));
  bmo->add_option("--t-min", t_min, "Earliest time covered by the family");
  auto* moments = app.add_subcommand("moment-report", "Unit-cylinder moments of a run or a stored field");
  common(moments, false);
  moments->add_option("--input", input, "Product snapshot file instead of a fresh run")->check(CLI::ExistingFile);
  auto* acceptance = app.add_subcommand("full-acceptance", "Run the acceptance criteria");
  common(acceptance, false);
  std::vector<int> ids;
  acceptance->add_option("--criterion", ids, "Only these criteria")->check(CLI::Range(1, 12));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    const RunOptions options{output_dir(flags), flags.skip_validate};
    if (*run) return finish(run_pipeline(load(flags), options), options.out);
    if (*sim) return finish(simulate_command(load(flags), options), options.out);
    if (*kernels) return finish(verify_kernels_command(load(flags), options), options.out);
    if (*op) return finish(verify_operator_command(load(flags), options), options.out);
    if (*bmo) return finish(bmo_report_command(input, order, t_min, options), options.out);
    if (*moments) {
      std::optional<std::filesystem::path> path;
      if (!input.empty()) path = input;
      return finish(moment_report_command(load(flags), path, options), options.out);
    }
    if (*acceptance) return finish(full_acceptance_command(ids, flags.seed.value_or(1), options), options.out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::BlowUpDetected:
      case ErrorKind::Instability: return kExitInstability;
      case ErrorKind::AssumptionViolation: return kExitCheckFailure;
      default: return kExitUsage;
    }
  }
  return kExitUsage;
}

}  // namespace rdb
