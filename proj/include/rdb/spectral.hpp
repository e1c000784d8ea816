#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "rdb/grid.hpp"

namespace rdb {

using Spectrum = std::vector<std::complex<double>>;

/// Cached real-to-complex transform pair for one grid shape.
///
/// Plans are created with FFTW_ESTIMATE, so the same input always produces
/// bit-identical output. Execution is serialized per plan.
class FftPlan {
 public:
  FftPlan(int dim, int points);
  ~FftPlan();
  FftPlan(const FftPlan&) = delete;
  FftPlan& operator=(const FftPlan&) = delete;

  /// Unnormalized forward transform.
  void forward(std::span<const double> in, std::span<std::complex<double>> out) const;
  /// Inverse transform including the 1/N^n normalization.
  void inverse(std::span<const std::complex<double>> in, std::span<double> out) const;

 private:
  struct Impl;
  Impl* impl_;
};

const FftPlan& plan_for(const Grid& grid);

Spectrum forward(const Field& f);
Field inverse(const Spectrum& spectrum, const Grid& grid);

/// Restores conjugate symmetry on the self-conjugate planes of the half spectrum.
void enforce_hermitian(Spectrum& spectrum, const Grid& grid);

/// |xi|^(2s), with the zero mode mapped to zero.
double fractional_symbol(double k2, double s);

/// Multiplies each coefficient by m(|xi|^2).
Field apply_radial_multiplier(const Field& f, const std::function<double(double)>& multiplier);

/// exp(-t kappa |xi|^(2s)) applied to f. s = 1 is the classical heat semigroup.
Field apply_semigroup(const Field& f, double t, double kappa, double s);

/// -|xi|^(2s) applied to f.
Field fractional_laplacian(const Field& f, double s);

/// Kernel whose torus Fourier coefficients are m(|xi|^2), sampled on the grid
/// and centred at the origin (point index N/2 along every axis).
Field synthesize_radial_kernel(const Grid& grid, const std::function<double(double)>& multiplier);

/// As above with the odd symbol i*xi_axis*m(|xi|^2). Nyquist planes are zeroed.
Field synthesize_gradient_kernel(const Grid& grid, int axis, const std::function<double(double)>& multiplier);

void require_order(double s);
void require_diffusivity(double kappa);

}  // namespace rdb
