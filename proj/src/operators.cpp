#include "rdb/operators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "rdb/error.hpp"
#include "rdb/spectral.hpp"

namespace rdb {

std::string_view to_string(OperatorMethod method) {
  switch (method) {
    case OperatorMethod::PdeSolve: return "pde-solve";
    case OperatorMethod::JDerivative: return "j-derivative";
    case OperatorMethod::DirectKernel: return "direct-kernel";
  }
  return "unknown";
}

namespace {

// phi1(z) = (e^z - 1)/z and phi2(z) = (e^z - 1 - z)/z^2, by series near zero.
void phi_functions(double z, double& phi1, double& phi2) {
  if (std::abs(z) < 0.1) {
    double term1 = 1.0;  // z^k/(k+1)!
    double term2 = 0.5;  // z^k/(k+2)!
    phi1 = 0.0;
    phi2 = 0.0;
    for (int k = 0; k < 12; ++k) {
      phi1 += term1;
      phi2 += term2;
      term1 *= z / (k + 2);
      term2 *= z / (k + 3);
    }
    return;
  }
  const double e = std::expm1(z);
  phi1 = e / z;
  phi2 = (e - z) / (z * z);
}

void require_zero_start(const SpaceTimeField& f) {
  if (f.empty()) fail(ErrorKind::TooFewFrames, "forcing has no frames");
  const double tol = f.frame_count() > 1 ? 1e-9 * f.spacing() : 1e-12;
  if (std::abs(f.times.front()) > tol) fail(ErrorKind::PreconditionViolation, "forcing lattice must start at t = 0");
  if (f.frame_count() > 1) f.require_uniform();
}

}  // namespace

SpaceTimeField integrate_forced(const SpaceTimeField& forcing, double kappa, double s,
                                const std::function<double(double)>& source_symbol) {
  require_diffusivity(kappa);
  require_order(s);
  require_zero_start(forcing);
  const Grid& grid = forcing.grid;
  SpaceTimeField out(grid);
  out.append(forcing.times.front(), Field(grid));
  if (forcing.frame_count() == 1) return out;

  const double h = forcing.spacing();
  const auto k2 = grid.wavenumber_squared();
  const std::size_t modes = k2.size();
  std::vector<double> decay(modes), c_old(modes), c_new(modes);
  for (std::size_t m = 0; m < modes; ++m) {
    const double mu = kappa * fractional_symbol(k2[m], s);
    const double sigma = source_symbol(k2[m]);
    double phi1 = 0.0;
    double phi2 = 0.0;
    phi_functions(-mu * h, phi1, phi2);
    decay[m] = std::exp(-mu * h);
    c_old[m] = sigma * h * (phi1 - phi2);
    c_new[m] = sigma * h * phi2;
  }

  Spectrum y(modes, {0.0, 0.0});
  Spectrum f_old = forward(forcing.frames.front());
  for (std::size_t k = 1; k < forcing.frame_count(); ++k) {
    Spectrum f_new = forward(forcing.frames[k]);
    for (std::size_t m = 0; m < modes; ++m) y[m] = decay[m] * y[m] + c_old[m] * f_old[m] + c_new[m] * f_new[m];
    out.append(forcing.times[k], inverse(y, grid));
    f_old = std::move(f_new);
  }
  return out;
}

SpaceTimeField solve_forced_heat(const SpaceTimeField& forcing, double kappa, double s) {
  return integrate_forced(forcing, kappa, s, [](double) { return 1.0; });
}

OperatorResult apply_T(const SpaceTimeField& forcing, double kappa, double s) {
  require_order(s);
  OperatorResult r{integrate_forced(forcing, kappa, s, [s](double k2) { return -fractional_symbol(k2, s); }),
                   std::nullopt, OperatorMethod::PdeSolve};
  return r;
}

SpaceTimeField time_derivative(const SpaceTimeField& f) {
  if (f.frame_count() < 3) fail(ErrorKind::TooFewFrames, "time derivative needs at least three frames");
  f.require_uniform();
  const double h = f.spacing();
  const std::size_t last = f.frame_count() - 1;
  const std::size_t n = f.grid.size();
  SpaceTimeField d(f.grid);
  for (std::size_t k = 0; k <= last; ++k) {
    Field frame(f.grid);
    for (std::size_t p = 0; p < n; ++p) {
      double v = 0.0;
      if (k == 0) {
        v = -3.0 * f.frames[0][p] + 4.0 * f.frames[1][p] - f.frames[2][p];
      } else if (k == last) {
        v = 3.0 * f.frames[last][p] - 4.0 * f.frames[last - 1][p] + f.frames[last - 2][p];
      } else {
        v = f.frames[k + 1][p] - f.frames[k - 1][p];
      }
      frame[p] = v / (2.0 * h);
    }
    d.append(f.times[k], std::move(frame));
  }
  return d;
}

OperatorResult apply_T_via_J(const SpaceTimeField& forcing, double kappa, double s) {
  require_zero_start(forcing);
  if (forcing.frame_count() < 3) fail(ErrorKind::TooFewFrames, "J route needs at least three frames");
  SpaceTimeField j = solve_forced_heat(forcing, kappa, s);
  SpaceTimeField phi = time_derivative(j);
  for (std::size_t k = 0; k < phi.frame_count(); ++k) {
    phi.frames[k] -= forcing.frames[k];
    phi.frames[k] *= 1.0 / kappa;
  }
  return OperatorResult{std::move(phi), std::move(j), OperatorMethod::JDerivative};
}

double space_time_l2(const SpaceTimeField& f) {
  double sum = 0.0;
  for (const Field& frame : f.frames)
    for (double v : frame.values) sum += v * v;
  return std::sqrt(sum * f.grid.cell_volume());
}

L2BoundReport check_L2_bound(const SpaceTimeField& forcing, double kappa, double s, double tolerance) {
  L2BoundReport report;
  report.tolerance = tolerance;
  const OperatorResult t = apply_T(forcing, kappa, s);
  report.forcing_norm = space_time_l2(forcing);
  report.output_norm = space_time_l2(t.phi);
  report.ratio = report.forcing_norm > 0.0 ? kappa * report.output_norm / report.forcing_norm : 0.0;
  return report;
}

HoelderModulus hoelder_time_modulus(const SpaceTimeField& j, double alpha, double forcing_sup, double max_gap,
                                    int lag_levels) {
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorKind::PreconditionViolation, "Hoelder exponent must lie in (0, 1)");
  if (!(forcing_sup > 0.0)) fail(ErrorKind::PreconditionViolation, "forcing sup must be positive");
  if (j.frame_count() < 2) fail(ErrorKind::EmptySample, "need at least two frames");
  j.require_uniform();
  const double h = j.spacing();

  std::vector<std::size_t> lags;
  for (int level = 0; level < lag_levels; ++level) {
    const auto d = static_cast<std::size_t>(std::llround(std::ldexp(max_gap, -level) / h));
    if (d >= 1 && d < j.frame_count() && std::find(lags.begin(), lags.end(), d) == lags.end()) lags.push_back(d);
  }
  if (lags.empty()) fail(ErrorKind::EmptySample, "no lag fits on the lattice");

  HoelderModulus result;
  result.alpha = alpha;
  for (std::size_t d : lags) {
    for (std::size_t k = 0; k + d < j.frame_count(); ++k) {
      const double gap = j.times[k + d] - j.times[k];
      const double scale = forcing_sup * std::pow(gap, alpha);
      const auto& a = j.frames[k].values;
      const auto& b = j.frames[k + d].values;
      double diff = 0.0;
      for (std::size_t p = 0; p < a.size(); ++p) diff = std::max(diff, std::abs(b[p] - a[p]));
      result.pairs += a.size();
      if (diff / scale > result.constant) {
        result.constant = diff / scale;
        result.worst_t1 = j.times[k];
        result.worst_t2 = j.times[k + d];
      }
    }
  }
  return result;
}

CylinderBoundReport cylinder_average_bound(const SpaceTimeField& forcing, double kappa, double s,
                                           const std::vector<ParabolicCylinder>& cylinders, double bound) {
  CylinderBoundReport report;
  report.bound = bound;
  for (const auto& q : cylinders) {
    const double t_lo = q.t0 - q.half_height();
    const double t_hi = q.t0 + q.half_height();
    if (forcing.empty() || t_lo < forcing.times.front() - 1e-9 || t_hi > forcing.times.back() + 1e-9)
      fail(ErrorKind::CylinderOutOfRange, "cylinder leaves the recorded time range");
  }
  const double sup = forcing.sup_norm();
  if (sup == 0.0) {
    report.ratios.assign(cylinders.size(), 0.0);
    return report;
  }
  const SpaceTimeField phi = apply_T(forcing, kappa, s).phi;
  for (const auto& q : cylinders) {
    const double r = std::abs(cylinder_average(phi, q)) / sup;
    report.ratios.push_back(r);
    report.max_ratio = std::max(report.max_ratio, r);
  }
  return report;
}

SpaceTimeField smooth_random_forcing(const Grid& grid, double horizon, double dt, std::uint64_t seed, int modes,
                                     int max_index) {
  if (!(dt > 0.0) || !(horizon >= 0.0)) fail(ErrorKind::InvalidArgument, "forcing lattice needs dt > 0 and horizon >= 0");
  if (modes < 1 || max_index < 1) fail(ErrorKind::InvalidArgument, "forcing needs at least one mode");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> index(-max_index, max_index);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> frequency(0.0, 3.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

  struct Mode {
    double k0, k1, omega, phase, amplitude;
  };
  std::vector<Mode> terms;
  double total = 0.0;
  const double base = 2.0 * std::numbers::pi / grid.length();
  for (int m = 0; m < modes; ++m) {
    int i0 = 0;
    int i1 = 0;
    do {
      i0 = index(rng);
      i1 = grid.dim() == 2 ? index(rng) : 0;
    } while (i0 == 0 && i1 == 0);
    Mode mode{base * i0, base * i1, frequency(rng), phase(rng), unit(rng)};
    total += std::abs(mode.amplitude);
    terms.push_back(mode);
  }

  const auto frames = static_cast<std::size_t>(std::llround(horizon / dt));
  SpaceTimeField f(grid);
  for (std::size_t k = 0; k <= frames; ++k) {
    const double t = static_cast<double>(k) * dt;
    f.append(t, Field::sample(grid, [&](std::span<const double> x) {
      double v = 0.0;
      for (const Mode& m : terms) {
        const double arg = m.k0 * x[0] + (x.size() > 1 ? m.k1 * x[1] : 0.0) + m.omega * t + m.phase;
        v += m.amplitude * std::cos(arg);
      }
      return v / total;
    }));
  }
  return f;
}

}  // namespace rdb
