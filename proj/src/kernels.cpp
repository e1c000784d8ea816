#include "rdb/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "rdb/error.hpp"
#include "rdb/spectral.hpp"

namespace rdb {

namespace {

double norm_squared(std::span<const double> x) {
  double r2 = 0.0;
  for (double v : x) r2 += v * v;
  return r2;
}

void require_positive_time(double t) {
  if (!(t > 0.0)) fail(ErrorKind::NonpositiveTime, "kernel time must be positive");
}

// Point indices within |x| <= radius, with their distances.
struct Window {
  std::vector<std::size_t> index;
  std::vector<double> radius;
};

Window central_window(const Grid& grid, double radius) {
  Window w;
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const auto x = grid.point(p);
    const double r = grid.dim() == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]);
    if (r <= radius) {
      w.index.push_back(p);
      w.radius.push_back(r);
    }
  }
  return w;
}

}  // namespace

BoundCheckReport fit_and_check(std::string name, std::span<const double> calibration,
                               std::span<const double> heldout, double tolerance) {
  BoundCheckReport r;
  r.bound_name = std::move(name);
  r.tolerance = tolerance;
  r.sample_count = static_cast<int>(calibration.size() + heldout.size());
  for (double c : calibration) r.fitted_constant = std::max(r.fitted_constant, c);
  for (double h : heldout) {
    const double rel = r.fitted_constant > 0.0 ? h / r.fitted_constant : (h > 0.0 ? INFINITY : 0.0);
    if (!(rel <= 1.0 + tolerance)) ++r.violations;
    r.worst_ratio = std::max(r.worst_ratio, rel);
  }
  return r;
}

double heat_kernel(double t, std::span<const double> x, double kappa) {
  if (t <= 0.0) return 0.0;
  const double a = kappa * t;
  const double n = static_cast<double>(x.size());
  return std::pow(4.0 * std::numbers::pi * a, -0.5 * n) * std::exp(-norm_squared(x) / (4.0 * a));
}

double singular_kernel_K(double t, std::span<const double> x, double kappa) {
  if (t <= 0.0) return 0.0;
  const double a = kappa * t;
  const double r2 = norm_squared(x);
  const double n = static_cast<double>(x.size());
  return heat_kernel(t, x, kappa) * (r2 / (4.0 * a * a) - n / (2.0 * a));
}

double singular_kernel_K_gradient_norm(double t, std::span<const double> x, double kappa) {
  if (t <= 0.0) return 0.0;
  const double a = kappa * t;
  const double r2 = norm_squared(x);
  const double n = static_cast<double>(x.size());
  const double h = r2 / (4.0 * a * a) - n / (2.0 * a);
  return heat_kernel(t, x, kappa) * std::sqrt(r2) * std::abs(1.0 / (2.0 * a * a) - h / (2.0 * a));
}

double singular_kernel_K_time_derivative(double t, std::span<const double> x, double kappa) {
  if (t <= 0.0) return 0.0;
  const double a = kappa * t;
  const double r2 = norm_squared(x);
  const double n = static_cast<double>(x.size());
  const double h = r2 / (4.0 * a * a) - n / (2.0 * a);
  return kappa * heat_kernel(t, x, kappa) * (h * h - r2 / (2.0 * a * a * a) + n / (2.0 * a * a));
}

std::vector<BoundCheckReport> check_K_bounds(double kappa, int n, const KernelSampleSpec& spec) {
  require_diffusivity(kappa);
  if (n != 1 && n != 2) fail(ErrorKind::InvalidDimension, "kernel dimension must be 1 or 2");
  if (spec.calibration_count < 2 || spec.heldout_count < 1 || !(spec.t_min > 0.0) ||
      !(spec.t_max > spec.t_min) || !(spec.r_min > 0.0) || !(spec.r_max > spec.r_min))
    fail(ErrorKind::DegenerateSampleSpec, "sample spec must span a range of times and radii");

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double lt0 = std::log(spec.t_min), lt1 = std::log(spec.t_max);
  const double lr0 = std::log(spec.r_min), lr1 = std::log(spec.r_max);

  struct Ratios {
    std::vector<double> value, gradient, time;
  };
  auto draw = [&](int count) {
    Ratios out;
    for (int k = 0; k < count; ++k) {
      const double t = std::exp(lt0 + (lt1 - lt0) * unit(rng));
      const double r = std::exp(lr0 + (lr1 - lr0) * unit(rng));
      const double theta = 2.0 * std::numbers::pi * unit(rng);
      std::array<double, 2> x{r * std::cos(theta), r * std::sin(theta)};
      if (n == 1) x[0] = std::cos(theta) < 0.0 ? -r : r;
      const std::span<const double> xs(x.data(), static_cast<std::size_t>(n));
      const double scale = std::sqrt(t) + r;
      out.value.push_back(std::abs(singular_kernel_K(t, xs, kappa)) * std::pow(scale, n + 2));
      out.gradient.push_back(singular_kernel_K_gradient_norm(t, xs, kappa) * std::pow(scale, n + 3));
      out.time.push_back(std::abs(singular_kernel_K_time_derivative(t, xs, kappa)) * std::pow(scale, n + 4));
    }
    return out;
  };
  const Ratios cal = draw(spec.calibration_count);
  const Ratios held = draw(spec.heldout_count);
  return {fit_and_check("K value", cal.value, held.value),
          fit_and_check("K gradient", cal.gradient, held.gradient),
          fit_and_check("K time derivative", cal.time, held.time)};
}

Field fractional_kernel_P(double t, const Grid& grid, double s) {
  require_positive_time(t);
  require_order(s);
  return synthesize_radial_kernel(grid, [&](double k2) { return std::exp(-t * fractional_symbol(k2, s)); });
}

Field fractional_kernel_P_time_derivative(double t, const Grid& grid, double s) {
  require_positive_time(t);
  require_order(s);
  return synthesize_radial_kernel(grid, [&](double k2) {
    const double lam = fractional_symbol(k2, s);
    return -lam * std::exp(-t * lam);
  });
}

Field kernel_A(double t, const Grid& grid, double s, double kappa) {
  require_positive_time(t);
  require_order(s);
  require_diffusivity(kappa);
  return synthesize_radial_kernel(grid, [&](double k2) {
    const double lam = fractional_symbol(k2, s);
    return -lam * std::exp(-t * kappa * lam);
  });
}

Field kernel_A_time_derivative(double t, const Grid& grid, double s, double kappa) {
  require_positive_time(t);
  require_order(s);
  require_diffusivity(kappa);
  return synthesize_radial_kernel(grid, [&](double k2) {
    const double lam = fractional_symbol(k2, s);
    return kappa * lam * lam * std::exp(-t * kappa * lam);
  });
}

Field kernel_A_gradient_norm(double t, const Grid& grid, double s, double kappa) {
  require_positive_time(t);
  require_order(s);
  require_diffusivity(kappa);
  auto multiplier = [&](double k2) {
    const double lam = fractional_symbol(k2, s);
    return -lam * std::exp(-t * kappa * lam);
  };
  Field out = synthesize_gradient_kernel(grid, 0, multiplier);
  if (grid.dim() == 2) {
    const Field second = synthesize_gradient_kernel(grid, 1, multiplier);
    for (std::size_t p = 0; p < out.size(); ++p) out.values[p] = std::hypot(out.values[p], second.values[p]);
  } else {
    for (double& v : out.values) v = std::abs(v);
  }
  return out;
}

TimeWindow resolved_time_window(const Grid& grid, double s, double kappa, double attenuation,
                                double scale_fraction) {
  require_order(s);
  require_diffusivity(kappa);
  const double kmax = std::numbers::pi / grid.dx();
  TimeWindow w{attenuation / (kappa * std::pow(kmax, 2.0 * s)), std::pow(scale_fraction * grid.length(), 2.0 * s)};
  if (!(w.hi > w.lo)) fail(ErrorKind::InvalidResolution, "grid cannot resolve the kernel at this order");
  return w;
}

TimeWindow bound_check_window(const Grid& grid, double s, double kappa) {
  try {
    return resolved_time_window(grid, s, kappa, 16.0, 1.0 / 32.0);
  } catch (const Error&) {
    return resolved_time_window(grid, s, kappa, 10.0, 1.0 / 16.0);
  }
}

std::vector<double> bound_sample_times(TimeWindow window) {
  std::vector<double> times(9);
  const double l0 = std::log(window.lo), l1 = std::log(window.hi);
  for (int k = 0; k < 9; ++k) times[k] = std::exp(l0 + (l1 - l0) * k / 8.0);
  return times;
}

namespace {

template <class RatioFn>
BoundCheckReport windowed_check(std::string name, std::span<const double> times, const Grid& grid,
                                RatioFn&& ratios_at) {
  if (times.size() < 2) fail(ErrorKind::DegenerateSampleSpec, "bound check needs at least two times");
  for (double t : times) require_positive_time(t);
  const Window window = central_window(grid, grid.length() / 4.0);
  std::vector<double> cal, held;
  for (std::size_t k = 0; k < times.size(); ++k) {
    auto& dst = (k % 2 == 0) ? cal : held;
    ratios_at(times[k], window, dst);
  }
  return fit_and_check(std::move(name), cal, held);
}

}  // namespace

BoundCheckReport check_P_decay(std::span<const double> times, const Grid& grid, double s) {
  require_order(s);
  const double n = grid.dim();
  return windowed_check("P decay", times, grid, [&](double t, const Window& w, std::vector<double>& out) {
    const Field p = fractional_kernel_P(t, grid, s);
    const double width2 = std::pow(t, 1.0 / s);
    for (std::size_t q = 0; q < w.index.size(); ++q) {
      const double r = w.radius[q];
      out.push_back(std::abs(p.values[w.index[q]]) * std::pow(t, n / (2.0 * s)) *
                    std::pow(1.0 + r * r / width2, 0.5 * (n + 2.0 * s)));
    }
  });
}

BoundCheckReport check_P_time_derivative(std::span<const double> times, const Grid& grid, double s) {
  require_order(s);
  return windowed_check("P time derivative", times, grid,
                        [&](double t, const Window& w, std::vector<double>& out) {
                          const Field p = fractional_kernel_P(t, grid, s);
                          const Field dp = fractional_kernel_P_time_derivative(t, grid, s);
                          for (std::size_t idx : w.index) {
                            const double pv = p.values[idx];
                            out.push_back(pv > 0.0 ? t * std::abs(dp.values[idx]) / pv
                                                   : std::numeric_limits<double>::infinity());
                          }
                        });
}

BoundCheckReport check_P_time_derivative(double t, const Grid& grid, double s) {
  require_positive_time(t);
  return check_P_time_derivative(bound_sample_times({0.5 * t, 2.0 * t}), grid, s);
}

std::vector<BoundCheckReport> check_A_bounds(std::span<const double> times, const Grid& grid, double s,
                                             double kappa) {
  require_order(s);
  require_diffusivity(kappa);
  const double n = grid.dim();
  std::vector<double> cal[3], held[3];
  if (times.size() < 2) fail(ErrorKind::DegenerateSampleSpec, "bound check needs at least two times");
  const Window w = central_window(grid, grid.length() / 4.0);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    require_positive_time(t);
    const Field a = kernel_A(t, grid, s, kappa);
    const Field da = kernel_A_time_derivative(t, grid, s, kappa);
    const Field ga = kernel_A_gradient_norm(t, grid, s, kappa);
    const double width = std::pow(t, 1.0 / (2.0 * s));
    auto* dst = (k % 2 == 0) ? cal : held;
    for (std::size_t q = 0; q < w.index.size(); ++q) {
      const double scale = w.radius[q] + width;
      const std::size_t idx = w.index[q];
      dst[0].push_back(std::abs(a.values[idx]) * std::pow(scale, n + 2.0 * s));
      dst[1].push_back(std::abs(da.values[idx]) * std::pow(scale, n + 4.0 * s));
      dst[2].push_back(ga.values[idx] * std::pow(scale, n + 2.0 * s + 1.0));
    }
  }
  return {fit_and_check("A value", cal[0], held[0]), fit_and_check("A time derivative", cal[1], held[1]),
          fit_and_check("A gradient", cal[2], held[2])};
}

double tail_exponent(const Field& kernel, double inner, double outer) {
  const Grid& grid = kernel.grid;
  const int n = grid.points();
  if (!(inner > 0.0) || !(outer > inner)) fail(ErrorKind::EmptySample, "tail window is empty");
  const std::size_t stride = grid.dim() == 1 ? 1 : static_cast<std::size_t>(n);
  const std::size_t offset = grid.dim() == 1 ? 0 : static_cast<std::size_t>(n / 2);
  // Log-spaced radii, each snapped to the nearest grid point on the positive first axis.
  constexpr int kSamples = 64;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int count = 0, previous = -1;
  for (int k = 0; k < kSamples; ++k) {
    const double r = inner * std::pow(outer / inner, k / double(kSamples - 1));
    const int i = n / 2 + static_cast<int>(std::lround(r / grid.dx()));
    if (i == previous || i >= n) continue;
    previous = i;
    const double x = grid.coordinate(i);
    const double v = std::abs(kernel.values[static_cast<std::size_t>(i) * stride + offset]);
    if (!(v > 0.0) || x < inner || x > outer) continue;
    const double lx = std::log(x), ly = std::log(v);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++count;
  }
  if (count < 3) fail(ErrorKind::EmptySample, "tail window holds fewer than three points");
  return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

}  // namespace rdb
