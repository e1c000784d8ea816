#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rdb/grid.hpp"

namespace rdb {

/// Outcome of a fitted-constant bound check.
///
/// The constant is the largest observed ratio on the calibration samples; a
/// held-out sample violates when its ratio exceeds constant * (1 + tolerance).
struct BoundCheckReport {
  std::string bound_name;
  double fitted_constant = 0.0;
  int sample_count = 0;
  int violations = 0;
  /// Largest held-out ratio divided by the fitted constant.
  double worst_ratio = 0.0;
  double tolerance = 1e-3;

  bool passed() const noexcept { return violations == 0; }
};

inline constexpr double kBoundTolerance = 1e-3;

BoundCheckReport fit_and_check(std::string name, std::span<const double> calibration,
                               std::span<const double> heldout, double tolerance = kBoundTolerance);

// Closed-form Gaussian kernels. The dimension is x.size(); t <= 0 gives 0.

/// g_{kappa t}(x) = (4 pi kappa t)^{-n/2} exp(-|x|^2 / (4 kappa t)).
double heat_kernel(double t, std::span<const double> x, double kappa);
/// K(t, x) = Laplacian of g_{kappa t}.
double singular_kernel_K(double t, std::span<const double> x, double kappa);
double singular_kernel_K_gradient_norm(double t, std::span<const double> x, double kappa);
double singular_kernel_K_time_derivative(double t, std::span<const double> x, double kappa);

/// Log-uniform sampling of (t, |x|) used by the closed-form bound checks.
struct KernelSampleSpec {
  double t_min = 1e-3;
  double t_max = 1e2;
  double r_min = 1e-3;
  double r_max = 1e2;
  int calibration_count = 4096;
  int heldout_count = 1024;
  std::uint64_t seed = 1;
};

/// |K|, |grad K|, |dK/dt| against B / (sqrt(t) + |x|)^{n+2}, ^{n+3}, ^{n+4}.
std::vector<BoundCheckReport> check_K_bounds(double kappa, int n, const KernelSampleSpec& spec);

// Spectrally synthesized kernels, centred at the origin of the grid.

/// Fractional heat kernel (kappa = 1): multiplier exp(-t |xi|^{2s}).
Field fractional_kernel_P(double t, const Grid& grid, double s);
/// Multiplier -|xi|^{2s} exp(-t |xi|^{2s}).
Field fractional_kernel_P_time_derivative(double t, const Grid& grid, double s);
/// Kernel of the fractional singular operator: multiplier -|xi|^{2s} exp(-t kappa |xi|^{2s}).
Field kernel_A(double t, const Grid& grid, double s, double kappa);
Field kernel_A_time_derivative(double t, const Grid& grid, double s, double kappa);
Field kernel_A_gradient_norm(double t, const Grid& grid, double s, double kappa);

/// Times in [t_lo, t_hi] where a kernel of order s is resolved on the grid:
/// the multiplier at the largest wavenumber is below exp(-attenuation) and the
/// spatial scale t^{1/(2s)} stays below `scale_fraction` * L.
struct TimeWindow {
  double lo;
  double hi;
};
TimeWindow resolved_time_window(const Grid& grid, double s, double kappa, double attenuation = 16.0,
                                double scale_fraction = 1.0 / 32.0);

/// Window used by the bound checks: attenuation 16 and scale L/32, relaxed to
/// attenuation 10 and scale L/16 when the grid is too coarse for the first choice.
TimeWindow bound_check_window(const Grid& grid, double s, double kappa);

/// Nine log-spaced times across the window; even indices calibrate, odd ones are held out.
std::vector<double> bound_sample_times(TimeWindow window);

/// Decay bound |P| <= C t^{-n/(2s)} (1 + |x|^2 / t^{1/s})^{-(n+2s)/2} over |x| <= L/4.
BoundCheckReport check_P_decay(std::span<const double> times, const Grid& grid, double s);
/// |dP/dt| <= (C / t) P over |x| <= L/4. Points where P <= 0 count as violations.
BoundCheckReport check_P_time_derivative(std::span<const double> times, const Grid& grid, double s);
/// Single-time form: nine times spread by a factor two either side of t.
BoundCheckReport check_P_time_derivative(double t, const Grid& grid, double s);
/// |A|, |dA/dt|, |grad A| against C / (|x| + t^{1/(2s)})^{n+2s}, ^{n+4s}, ^{n+2s+1}.
std::vector<BoundCheckReport> check_A_bounds(std::span<const double> times, const Grid& grid, double s,
                                             double kappa);

/// Least-squares slope of log|k| against log|x| along the first axis, over inner <= |x| <= outer.
double tail_exponent(const Field& kernel, double inner, double outer);

}  // namespace rdb
