#include "rdb/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "rdb/acceptance.hpp"
#include "rdb/analysis.hpp"
#include "rdb/error.hpp"
#include "rdb/io.hpp"
#include "rdb/kernels.hpp"
#include "rdb/operators.hpp"
#include "rdb/solver.hpp"

namespace rdb {

namespace {

std::string kv(const std::string& key, double value) { return key + "=" + format_number(value); }

std::string list_text(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i]);
  return s;
}

/// Runs one diagnostic; a library error becomes a failing check.
template <class Fn>
void guarded(Report& report, const std::string& name, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    report.add({name + " ran without error", "", 0.0, 0.0, false, e.what()});
  }
}

void describe(Report& report, const RunConfig& c, const SystemSpec& spec) {
  report.note("model", spec.nonlinearity.name);
  for (std::size_t i = 0; i < spec.nonlinearity.consumption_text.size(); ++i)
    report.note("p" + std::to_string(i + 1), spec.nonlinearity.consumption_text[i]);
  for (std::size_t j = 0; j < spec.nonlinearity.production_text.size(); ++j)
    report.note("f" + std::to_string(j + 1), spec.nonlinearity.production_text[j]);
  report.note("grid", "n=" + std::to_string(c.dim) + " L=" + format_number(c.length) + " N=" + std::to_string(c.points));
  report.note("time", "T=" + format_number(c.simulation.horizon) + " dt=" + format_number(c.simulation.dt) +
                          " stride=" + std::to_string(c.simulation.stride));
  report.note("diffusion", "eta=" + list_text(spec.fuel_diffusivity) + " kappa=" + list_text(spec.product_diffusivity) +
                               " s=" + format_number(spec.order));
  report.note("bounds", "K1=" + format_number(spec.fuel_bound) + " K2=" + format_number(spec.product_bound));
  report.note("seed", std::to_string(c.seed));
}

/// Adds the validator verdicts; returns false when any inequality is violated.
bool validate(Report& report, const RunConfig& c, const SystemSpec& spec) {
  const AssumptionReport ar = validate_assumptions(spec.nonlinearity, c.box, c.validation_samples);
  for (const AssumptionCheck& a : ar.checks)
    report.add({"assumption " + a.name, a.anchor, static_cast<double>(a.violations), 0.0, a.passed(),
                kv("samples", a.samples) + " " + kv("worst_excess", a.worst_excess)});
  return ar.passed();
}

struct Simulated {
  std::optional<Trajectory> traj;
  int exit_code = kExitPass;
};

/// Validation (unless skipped) and simulation shared by the run-type commands.
Simulated validated_run(Report& report, const RunConfig& c, const RunOptions& options, const SystemSpec& spec) {
  Simulated out;
  if (options.skip_validate) {
    report.note("validation", "skipped");
  } else if (!validate(report, c, spec)) {
    report.note("result", "assumption-violation: no simulation was run");
    out.exit_code = kExitCheckFailure;
    return out;
  }
  const InitialData init = make_initial_data(spec, c.grid(), c.init);
  try {
    out.traj = simulate(spec, init, c.simulation);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::BlowUpDetected && e.kind() != ErrorKind::Instability) throw;
    report.add({"run completed", "", 0.0, c.simulation.horizon, false, e.what()});
    out.exit_code = kExitInstability;
    return out;
  }
  const Trajectory& t = *out.traj;
  report.note("status", std::string(to_string(t.status)) + (t.message.empty() ? "" : " (" + t.message + ")"));
  report.add({"run completed", "", t.horizon, c.simulation.horizon, t.status == RunStatus::Completed,
              std::string(to_string(t.status))});
  if (t.status != RunStatus::Completed) out.exit_code = kExitInstability;
  return out;
}

void write_timeline(Report& report, const std::vector<TimelinePoint>& timeline, const std::filesystem::path& dir) {
  std::vector<std::vector<double>> rows;
  for (const auto& p : timeline) rows.push_back({p.t, p.sup});
  write_csv(dir / "timeline.csv", {"t", "sup_v"}, rows);
  report.artifacts.push_back("timeline.csv");
}

void structural_checks(Report& report, const Trajectory& traj, const ToleranceConfig& tol) {
  const SystemSpec& spec = traj.spec;
  double u_max = traj.stats.fuel_max, u_min = traj.stats.fuel_min, v_min = traj.stats.product_min, p_min = HUGE_VAL;
  for (const auto& u : traj.fuels) u_max = std::max(u_max, u.max()), u_min = std::min(u_min, u.min());
  for (const auto& v : traj.products) v_min = std::min(v_min, v.min());
  for (const auto& p : traj.consumption) p_min = std::min(p_min, p.min());
  report.add(check_at_most("max U", "feb704", u_max, spec.fuel_bound + tol.max_principle));
  report.add(check_at_least("min U", "feb704", u_min, -tol.positivity));
  report.add(check_at_least("min V", "sep930_1", v_min, -tol.positivity,
                            kv("clipped_values", static_cast<double>(traj.stats.clipped_values)) + " " +
                                kv("deepest_clip", traj.stats.deepest_clip)));
  report.add(check_at_least("min recorded p", "sep930_3", p_min, -tol.positivity));
  // Clipping may add up to the positivity tolerance per sample.
  double increase = -HUGE_VAL;
  for (const auto& u : traj.fuels)
    for (std::size_t k = 1; k < u.frame_count(); ++k)
      increase = std::max(increase, u.frames[k].integral() - u.frames[k - 1].integral());
  const double volume = std::pow(traj.grid().length(), traj.grid().dim());
  report.add(check_at_most("largest increase of fuel mass between frames", "", increase, tol.positivity * volume));
}

void plateau_check(Report& report, const Trajectory& traj, const std::vector<TimelinePoint>& timeline,
                   const ToleranceConfig& tol) {
  const double T = traj.horizon;
  const double early = timeline_max(timeline, T / 4, T / 2), late = timeline_max(timeline, T / 2, T);
  const double growth = early > 0.0 ? late / early - 1.0 : (late > 0.0 ? HUGE_VAL : 0.0);
  report.add(check_at_most("sup V over [T/2, T] relative to [T/4, T/2], minus one",
                           traj.spec.order < 1.0 ? "thm:nov24" : "thm:main", growth, tol.plateau,
                           kv("sup_T/4..T/2", early) + " " + kv("sup_T/2..T", late)));
}

std::vector<double> default_goodbad_times(const SpaceTimeField& f) {
  std::vector<double> out;
  const double T = f.times.back();
  for (double t : {T / 8, T / 2, T}) {
    const auto it = std::min_element(f.times.begin(), f.times.end(),
                                     [t](double a, double b) { return std::abs(a - t) < std::abs(b - t); });
    if (out.empty() || *it > out.back()) out.push_back(*it);
  }
  return out;
}

double drift_ratio(double a, double b) {
  if (a <= 0.0) return b <= 0.0 ? 0.0 : HUGE_VAL;
  return std::abs(b / a - 1.0);
}

void bmo_checks(Report& report, const Trajectory& traj, const ToleranceConfig& tol, const std::filesystem::path& dir) {
  const double s = traj.spec.order;
  for (std::size_t j = 0; j < traj.products.size(); ++j) {
    const std::string tag = "v" + std::to_string(j + 1);
    const SpaceTimeField& v = traj.products[j];
    const CylinderFamily family = standard_family(v, s, 1.0);
    const SeminormResult full = pbmo_seminorm(v, family);
    write_text(dir / ("family_" + tag + ".txt"), family.description + "\n");
    report.artifacts.push_back("family_" + tag + ".txt");
    report.note("pbmo " + tag, format_number(full.value) + " over " + std::to_string(full.cylinder_count) +
                                   " cylinders; worst t0=" + format_number(full.worst.t0) +
                                   " R=" + format_number(full.worst.radius));
    const SeminormResult half = pbmo_seminorm(v, standard_family(v, s, 1.0, traj.horizon / 2));
    report.add(check_at_most("seminorm drift of " + tag + " between T/2 and T", s < 1.0 ? "prop-feb1402" : "lem-jul2202",
                             drift_ratio(half.value, full.value), tol.drift,
                             kv("pbmo_T/2", half.value) + " " + kv("pbmo_T", full.value)));
  }
}

void moment_checks(Report& report, const RunConfig& c, std::span<const SpaceTimeField> products, double s,
                   const std::filesystem::path& dir) {
  const DiagnosticsConfig& d = c.diagnostics;
  const auto cylinders = unit_cylinders(products[0], s, d.moment_count);
  const bool sub = d.moment_rho < 1.0;
  std::vector<double> z = d.moment_weights;
  if (z.empty()) z.assign(products.size(), 1.0);
  if (!sub && z.size() != products.size())
    fail(ErrorKind::InvalidArgument, "diagnostics.moments.Z needs one weight per product");
  const MomentReport m = sub ? subexp_moment_report(products[0], d.moment_r, d.moment_rho, cylinders)
                             : exp_moment_report(products, z, cylinders);
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < cylinders.size(); ++k)
    rows.push_back({cylinders[k].t0, cylinders[k].x0[0], cylinders[k].x0[1], cylinders[k].radius, m.values[k]});
  write_csv(dir / "moments.csv", {"t0", "x0", "y0", "radius", "moment"}, rows);
  report.artifacts.push_back("moments.csv");
  const bool finite = std::all_of(m.values.begin(), m.values.end(), [](double x) { return std::isfinite(x); });
  report.add({sub ? "sub-exponential moments finite and >= 1" : "exponential moments finite and >= 1",
              sub ? "jul2531-a" : "jul2531", m.max, HUGE_VAL, finite && m.min >= 1.0 - 1e-12,
              kv("min", m.min) + " " + kv("max/min", m.max / m.min) + " " + kv("cylinders", cylinders.size())});
}

void jn_checks(Report& report, const Trajectory& traj, const ToleranceConfig& tol, const std::filesystem::path& dir) {
  const double s = traj.spec.order;
  const SpaceTimeField& v = traj.products[0];
  const double T = traj.horizon;
  const double radius = std::min(v.grid.length() / 4.0, std::pow(0.999 * T / 2.0, 1.0 / (2.0 * s)));
  const ParabolicCylinder q{T / 2.0, {0.0, 0.0}, radius, s};
  // Levels scale with the oscillation on the cylinder itself; a family-wide
  // estimate is dominated by early times and can miss a flat late cylinder.
  const double estimate = mean_oscillation(v, q);
  const TailCurve tail = jn_tail(v, q, default_jn_levels(estimate > 0.0 ? estimate : 1.0));
  std::vector<std::vector<double>> rows;
  for (std::size_t k = 0; k < tail.levels.size(); ++k) rows.push_back({tail.levels[k], tail.measures[k]});
  write_csv(dir / "tail_v1.csv", {"lambda", "measure"}, rows);
  report.artifacts.push_back("tail_v1.csv");
  const std::string anchor = s < 1.0 ? "lem-john-nir-a" : "lem-john-nir";
  if (tail.degenerate) {
    report.add({"level-set tail of v1", anchor, tail.slope, 0.0, true, "degenerate field: zero oscillation"});
    return;
  }
  report.add({"fitted tail slope of v1", anchor, tail.slope, 0.0, tail.fitted_points >= 2 && tail.slope < 0.0,
              kv("r_squared", tail.r_squared) + " " + kv("r_squared_reference", tol.jn_r_squared) + " " +
                  kv("fitted_points", tail.fitted_points) + " " + kv("radius", radius)});
}

/// The PDE/J comparison is only asserted for the recorded forcing; random
/// forcings at the run lattice are often too stiff for the finite-difference route.
void operator_checks(Report& report, const SpaceTimeField& forcing, double kappa, double s, const ToleranceConfig& tol,
                     const std::string& label, bool compare_routes) {
  const L2BoundReport l2 = check_L2_bound(forcing, kappa, s, tol.l2);
  report.add(check_at_most("kappa |T F|_2 / |F|_2, " + label, s < 1.0 ? "feb1426" : "jul2337", l2.ratio,
                           1.0 + tol.l2));
  const auto pde = apply_T(forcing, kappa, s);
  const auto via_j = apply_T_via_J(forcing, kappa, s);
  double diff = 0.0;
  for (std::size_t k = 0; k < pde.phi.frame_count(); ++k)
    diff = std::max(diff, max_abs_difference(pde.phi.frames[k], via_j.phi.frames[k]));
  const double scale = std::max(pde.phi.sup_norm(), 1e-300);
  if (compare_routes)
    report.add(check_at_most("|Phi_pde - Phi_J| / |Phi|, " + label, s < 1.0 ? "jul2604-a" : "jul2604",
                           pde.phi.sup_norm() > 0.0 ? diff / scale : 0.0, tol.operator_agreement,
                           kv("absolute", diff)));
  const double gap = std::min(1.0, forcing.times.back() / 2.0);
  const double sup = forcing.sup_norm();
  if (sup > 0.0 && via_j.j) {
    const HoelderModulus h = hoelder_time_modulus(*via_j.j, 0.9, sup, gap);
    report.add({"Hoelder modulus D_0.9 of J finite, " + label, "jul2614", h.constant, HUGE_VAL,
                std::isfinite(h.constant), kv("pairs", static_cast<double>(h.pairs))});
  }
}

}  // namespace

Outcome run_pipeline(const RunConfig& c, const RunOptions& options) {
  Outcome out;
  Report& report = out.report;
  report.title = "run";
  const SystemSpec spec = c.system();
  describe(report, c, spec);
  Simulated sim = validated_run(report, c, options, spec);
  const ToleranceConfig& tol = c.tolerance;
  if (sim.traj) {
    const Trajectory& traj = *sim.traj;
    structural_checks(report, traj, tol);
    const auto timeline = sup_timeline(traj);
    write_timeline(report, timeline, options.out);
    if (sim.exit_code == kExitPass) {
      const DiagnosticsConfig& d = c.diagnostics;
      if (d.timeline) guarded(report, "timeline plateau", [&] { plateau_check(report, traj, timeline, tol); });
      std::optional<AuxiliarySet> aux;
      const bool want_goodbad = d.goodbad && spec.order == 1.0;
      if (d.duhamel || d.decomposition || want_goodbad)
        guarded(report, "auxiliary solves", [&] { aux = duhamel_split(traj, want_goodbad); });
      if (aux && d.duhamel) {
        report.add(check_at_most("reconstruction residual", "jul2212", reconstruction_residual(traj, *aux).max(),
                                 tol.reconstruction));
        for (int j = 0; j < spec.products(); ++j)
          report.add(check_at_most("H_" + std::to_string(j + 1) + " - sum_i A_ji H_ij", "sep0930_4",
                                   stoichiometric_excess(traj, *aux, j), tol.stoichiometric));
      }
      if (aux && d.decomposition) {
        for (int i = 0; i < spec.fuels(); ++i)
          for (int j = 0; j < spec.products(); ++j)
            report.add(check_at_most("|H_ij - F_i - (kappa_j - eta_i) T F_i|, i=" + std::to_string(i + 1) +
                                         " j=" + std::to_string(j + 1),
                                     "jul2327", decomposition_residual(*aux, i, j), tol.decomposition));
      }
      if (d.goodbad && !want_goodbad) report.note("goodbad", "skipped: the cone split needs s = 1");
      if (aux && want_goodbad) {
        guarded(report, "good/bad split", [&] {
          const auto times =
              d.goodbad_times.empty() ? default_goodbad_times(traj.consumption[0]) : d.goodbad_times;
          const double k1 = spec.fuel_bound;
          for (int i = 0; i < spec.fuels(); ++i) {
            for (int j = 0; j < spec.products(); ++j) {
              for (int m : d.goodbad_m) {
                const GoodBadCheck g = check_good_bad(good_bad_split(traj, i, j, m, times), *aux, i, j, k1);
                const std::string where =
                    "i=" + std::to_string(i + 1) + " j=" + std::to_string(j + 1) + " m=" + std::to_string(m);
                report.add(check_at_most("H_g - alpha K1, " + where, "jul2230", g.good_excess, tol.goodbad * k1,
                                         kv("alpha", g.alpha)));
                report.add(check_at_most("H_b - beta W, " + where, "jul2234", g.bad_excess, tol.goodbad * k1,
                                         kv("beta", g.beta) + " " + kv("split_mismatch", g.total_mismatch)));
                report.add(check_at_most("combined bound excess, " + where, "jul2540", g.combined_excess,
                                         tol.goodbad * k1));
              }
            }
          }
        });
      }
      if (d.bmo) guarded(report, "seminorm", [&] { bmo_checks(report, traj, tol, options.out); });
      if (d.moments)
        guarded(report, "moments", [&] { moment_checks(report, c, traj.products, spec.order, options.out); });
      if (d.jn) guarded(report, "John-Nirenberg tail", [&] { jn_checks(report, traj, tol, options.out); });
      if (d.operator_checks) {
        guarded(report, "operator checks", [&] {
          operator_checks(report, traj.consumption[0], spec.product_diffusivity[0], spec.order, tol, "recorded p1", true);
          const SpaceTimeField random = smooth_random_forcing(traj.grid(), traj.horizon,
                                                              traj.consumption[0].spacing(), c.seed);
          operator_checks(report, random, spec.product_diffusivity[0], spec.order, tol, "random forcing", false);
        });
      }
    }
  }
  if (out.exit_code == kExitPass) out.exit_code = sim.exit_code;
  if (out.exit_code == kExitPass && !report.passed()) out.exit_code = kExitCheckFailure;
  write_report(report, options.out);
  return out;
}

Outcome simulate_command(const RunConfig& c, const RunOptions& options) {
  Outcome out;
  Report& report = out.report;
  report.title = "simulate";
  const SystemSpec spec = c.system();
  describe(report, c, spec);
  Simulated sim = validated_run(report, c, options, spec);
  if (sim.traj) {
    const Trajectory& traj = *sim.traj;
    structural_checks(report, traj, c.tolerance);
    write_timeline(report, sup_timeline(traj), options.out);
    const bool small = traj.grid().size() * traj.frame_count() <= 250000;
    auto store = [&](const std::vector<SpaceTimeField>& fields, const std::string& prefix) {
      for (std::size_t k = 0; k < fields.size(); ++k) {
        const std::string name = prefix + std::to_string(k + 1);
        write_trajectory_binary(fields[k], options.out / (name + ".bin"));
        report.artifacts.push_back(name + ".bin");
        if (small) {
          write_frames_csv(fields[k], options.out / (name + "_frames.csv"));
          report.artifacts.push_back(name + "_frames.csv");
        }
      }
    };
    store(traj.fuels, "u");
    store(traj.products, "v");
    store(traj.consumption, "p");
    store(traj.production, "f");
  }
  out.exit_code = sim.exit_code != kExitPass ? sim.exit_code : (report.passed() ? kExitPass : kExitCheckFailure);
  write_report(report, options.out);
  return out;
}

Outcome verify_kernels_command(const RunConfig& c, const RunOptions& options) {
  Outcome out;
  Report& report = out.report;
  report.title = "verify-kernels";
  report.note("grids", "n=1: L=N=8192; n=2: L=N=1024");
  // g against the envelope B / (sqrt(t) + |x|)^n on the K sampling scheme.
  for (int dim : {1, 2}) {
    KernelSampleSpec spec;
    spec.seed = c.seed;
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw = [&](int count) {
      std::vector<double> ratios;
      for (int k = 0; k < count; ++k) {
        const double t = spec.t_min * std::pow(spec.t_max / spec.t_min, unit(rng));
        const double r = spec.r_min * std::pow(spec.r_max / spec.r_min, unit(rng));
        const double angle = 2.0 * 3.141592653589793 * unit(rng);
        const std::array<double, 2> x{dim == 1 ? r : r * std::cos(angle), r * std::sin(angle)};
        const double g = heat_kernel(t, std::span<const double>(x.data(), dim), 1.0);
        ratios.push_back(g * std::pow(std::sqrt(t) + r, dim));
      }
      return ratios;
    };
    const auto cal = draw(spec.calibration_count);
    const auto held = draw(spec.heldout_count);
    const BoundCheckReport r = fit_and_check("g value", cal, held);
    report.add(check_at_most("g value held-out violations, n = " + std::to_string(dim), "", r.violations, 0.0,
                             kv("constant", r.fitted_constant) + " " + kv("worst_ratio", r.worst_ratio)));
  }
  for (auto& check : kernel_bound_suite({0.25, 0.5, 0.75, 1.0}, 8192, 1024, c.seed)) report.add(std::move(check));
  out.exit_code = report.passed() ? kExitPass : kExitCheckFailure;
  write_report(report, options.out);
  return out;
}

Outcome verify_operator_command(const RunConfig& c, const RunOptions& options) {
  Outcome out;
  Report& report = out.report;
  report.title = "verify-operator";
  const SystemSpec spec = c.system();
  const Grid grid = c.grid();
  const double kappa = spec.product_diffusivity[0], s = spec.order;
  const double T = c.simulation.horizon, h = c.simulation.dt * c.simulation.stride;
  report.note("lattice", "T=" + format_number(T) + " frame spacing=" + format_number(h));
  report.note("operator", "kappa=" + format_number(kappa) + " s=" + format_number(s));
  std::mt19937_64 rng(c.seed);
  double worst = 0.0;
  for (int k = 0; k < 20; ++k)
    worst = std::max(worst, check_L2_bound(smooth_random_forcing(grid, T, h, rng()), kappa, s).ratio);
  report.add(check_at_most("max kappa |T F|_2 / |F|_2 over 20 forcings", s < 1.0 ? "feb1426" : "jul2337", worst,
                           1.0 + c.tolerance.l2));
  std::vector<double> d, modulus;
  for (double step : {h, h / 2}) {
    const auto f = smooth_random_forcing(grid, T, step, c.seed);
    const auto pde = apply_T(f, kappa, s);
    const auto via_j = apply_T_via_J(f, kappa, s);
    double diff = 0.0;
    for (std::size_t k = 0; k < pde.phi.frame_count(); ++k)
      diff = std::max(diff, max_abs_difference(pde.phi.frames[k], via_j.phi.frames[k]));
    d.push_back(diff / std::max(pde.phi.sup_norm(), 1e-300));
    modulus.push_back(hoelder_time_modulus(*via_j.j, 0.9, f.sup_norm(), std::min(1.0, T / 2)).constant);
  }
  report.add(check_at_most("|Phi_pde - Phi_J| / |Phi| at the half spacing", s < 1.0 ? "jul2604-a" : "jul2604", d[1],
                           c.tolerance.operator_agreement,
                           kv("at_spacing", d[0]) + " " + kv("observed_order", std::log2(d[0] / d[1]))));
  report.add(check_at_most("relative change of D_0.9 under halving", "jul2614", std::abs(modulus[1] / modulus[0] - 1.0),
                           0.10, kv("D", modulus[0]) + " " + kv("D_half", modulus[1])));
  out.exit_code = report.passed() ? kExitPass : kExitCheckFailure;
  write_report(report, options.out);
  return out;
}

Outcome bmo_report_command(const std::filesystem::path& input, double order, double t_min,
                           const RunOptions& options) {
  Outcome out;
  Report& report = out.report;
  report.title = "bmo-report";
  const SpaceTimeField f = read_trajectory_binary(input);
  report.note("input", input.string());
  report.note("frames", std::to_string(f.frame_count()));
  const CylinderFamily family = standard_family(f, order, t_min);
  const SeminormResult r = pbmo_seminorm(f, family);
  report.note("family", family.description);
  report.note("worst cylinder", "t0=" + format_number(r.worst.t0) + " x0=" + format_number(r.worst.x0[0]) + "," +
                                    format_number(r.worst.x0[1]) + " R=" + format_number(r.worst.radius));
  write_text(options.out / "family.txt", family.description + "\n");
  report.artifacts.push_back("family.txt");
  report.add({"pbmo seminorm", order < 1.0 ? "lem-jul151-a" : "lem-jul2202", r.value, 2.0 * f.sup_norm(),
              std::isfinite(r.value) && r.value <= 2.0 * f.sup_norm() + 1e-12,
              kv("cylinders", static_cast<double>(r.cylinder_count))});
  out.exit_code = report.passed() ? kExitPass : kExitCheckFailure;
  write_report(report, options.out);
  return out;
}

Outcome moment_report_command(const RunConfig& c, const std::optional<std::filesystem::path>& input,
                              const RunOptions& options) {
  Outcome out;
  Report& report = out.report;
  report.title = "moment-report";
  const SystemSpec spec = c.system();
  if (input) {
    report.note("input", input->string());
    const std::vector<SpaceTimeField> products{read_trajectory_binary(*input)};
    moment_checks(report, c, products, spec.order, options.out);
  } else {
    describe(report, c, spec);
    Simulated sim = validated_run(report, c, options, spec);
    out.exit_code = sim.exit_code;
    if (sim.traj && sim.exit_code == kExitPass)
      guarded(report, "moments", [&] { moment_checks(report, c, sim.traj->products, spec.order, options.out); });
  }
  if (out.exit_code == kExitPass && !report.passed()) out.exit_code = kExitCheckFailure;
  write_report(report, options.out);
  return out;
}

Outcome full_acceptance_command(const std::vector<int>& ids, std::uint64_t seed, const RunOptions& options) {
  Outcome out;
  Report& report = out.report;
  report.title = "full-acceptance";
  std::vector<int> selected = ids;
  if (selected.empty())
    for (int k = 1; k <= kCriterionCount; ++k) selected.push_back(k);
  for (int id : selected) {
    const CriterionResult r = run_criterion(id, seed);
    std::string failing;
    for (const auto& c : r.checks)
      if (!c.passed) failing += (failing.empty() ? "" : "; ") + format_check(c);
    report.add({"criterion " + std::to_string(id) + " " + r.title, "", r.seconds, criterion_budget(id), r.passed(),
                failing});
  }
  out.exit_code = report.passed() ? kExitPass : kExitCheckFailure;
  write_report(report, options.out);
  return out;
}

}  // namespace rdb
