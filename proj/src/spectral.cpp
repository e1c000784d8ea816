#include "rdb/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "rdb/error.hpp"

namespace rdb {

struct FftPlan::Impl {
  int dim;
  int points;
  std::size_t real_size;
  std::size_t complex_size;
  double* real_buffer = nullptr;
  fftw_complex* complex_buffer = nullptr;
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  mutable std::mutex mutex;
};

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

FftPlan::FftPlan(int dim, int points) : impl_(new Impl) {
  impl_->dim = dim;
  impl_->points = points;
  const auto n = static_cast<std::size_t>(points);
  const auto half = n / 2 + 1;
  impl_->real_size = dim == 1 ? n : n * n;
  impl_->complex_size = dim == 1 ? half : n * half;
  impl_->real_buffer = fftw_alloc_real(impl_->real_size);
  impl_->complex_buffer = fftw_alloc_complex(impl_->complex_size);
  std::lock_guard lock(planner_mutex());
  if (dim == 1) {
    impl_->r2c = fftw_plan_dft_r2c_1d(points, impl_->real_buffer, impl_->complex_buffer, FFTW_ESTIMATE);
    impl_->c2r = fftw_plan_dft_c2r_1d(points, impl_->complex_buffer, impl_->real_buffer, FFTW_ESTIMATE);
  } else {
    impl_->r2c = fftw_plan_dft_r2c_2d(points, points, impl_->real_buffer, impl_->complex_buffer, FFTW_ESTIMATE);
    impl_->c2r = fftw_plan_dft_c2r_2d(points, points, impl_->complex_buffer, impl_->real_buffer, FFTW_ESTIMATE);
  }
}

FftPlan::~FftPlan() {
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(impl_->r2c);
    fftw_destroy_plan(impl_->c2r);
  }
  fftw_free(impl_->real_buffer);
  fftw_free(impl_->complex_buffer);
  delete impl_;
}

void FftPlan::forward(std::span<const double> in, std::span<std::complex<double>> out) const {
  std::lock_guard lock(impl_->mutex);
  std::copy(in.begin(), in.end(), impl_->real_buffer);
  fftw_execute(impl_->r2c);
  auto* c = reinterpret_cast<std::complex<double>*>(impl_->complex_buffer);
  std::copy(c, c + impl_->complex_size, out.begin());
}

void FftPlan::inverse(std::span<const std::complex<double>> in, std::span<double> out) const {
  std::lock_guard lock(impl_->mutex);
  auto* c = reinterpret_cast<std::complex<double>*>(impl_->complex_buffer);
  std::copy(in.begin(), in.end(), c);
  // c2r overwrites its input, so it always runs on the private buffer.
  fftw_execute(impl_->c2r);
  const double scale = 1.0 / static_cast<double>(impl_->real_size);
  for (std::size_t i = 0; i < impl_->real_size; ++i) out[i] = impl_->real_buffer[i] * scale;
}

const FftPlan& plan_for(const Grid& grid) {
  static std::mutex cache_mutex;
  static std::map<std::pair<int, int>, std::unique_ptr<FftPlan>> cache;
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[{grid.dim(), grid.points()}];
  if (!slot) slot = std::make_unique<FftPlan>(grid.dim(), grid.points());
  return *slot;
}

Spectrum forward(const Field& f) {
  Spectrum out(f.grid.spectral_size());
  plan_for(f.grid).forward(f.values, out);
  return out;
}

Field inverse(const Spectrum& spectrum, const Grid& grid) {
  if (spectrum.size() != grid.spectral_size()) fail(ErrorKind::InvalidArgument, "spectrum size mismatch");
  Field f(grid);
  plan_for(grid).inverse(spectrum, f.values);
  return f;
}

void enforce_hermitian(Spectrum& spectrum, const Grid& grid) {
  const int n = grid.points();
  const int half = n / 2 + 1;
  if (grid.dim() == 1) {
    spectrum[0].imag(0.0);
    spectrum[n / 2].imag(0.0);
    return;
  }
  for (int col : {0, n / 2}) {
    auto at = [&](int row) -> std::complex<double>& {
      return spectrum[static_cast<std::size_t>(row) * half + col];
    };
    at(0).imag(0.0);
    at(n / 2).imag(0.0);
    for (int row = 1; row < n / 2; ++row) {
      const auto sym = 0.5 * (at(row) + std::conj(at(n - row)));
      at(row) = sym;
      at(n - row) = std::conj(sym);
    }
  }
}

double fractional_symbol(double k2, double s) {
  if (k2 == 0.0) return 0.0;
  return s == 1.0 ? k2 : std::pow(k2, s);
}

void require_order(double s) {
  if (!(s > 0.0 && s <= 1.0)) fail(ErrorKind::InvalidOrder, "fractional order must lie in (0, 1]");
}

void require_diffusivity(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    fail(ErrorKind::NonpositiveDiffusivity, "diffusivity must be positive");
}

Field apply_radial_multiplier(const Field& f, const std::function<double(double)>& multiplier) {
  Spectrum spec = forward(f);
  const auto k2 = f.grid.wavenumber_squared();
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= multiplier(k2[i]);
  enforce_hermitian(spec, f.grid);
  return inverse(spec, f.grid);
}

Field apply_semigroup(const Field& f, double t, double kappa, double s) {
  if (t < 0.0) fail(ErrorKind::NegativeTime, "semigroup time must be >= 0");
  require_diffusivity(kappa);
  require_order(s);
  if (t == 0.0) return f;
  return apply_radial_multiplier(f, [&](double k2) { return std::exp(-t * kappa * fractional_symbol(k2, s)); });
}

Field fractional_laplacian(const Field& f, double s) {
  require_order(s);
  return apply_radial_multiplier(f, [&](double k2) { return -fractional_symbol(k2, s); });
}

namespace {

// Phase that moves the origin from point index 0 to index N/2: (-1)^i per axis.
double centring_sign(const Grid& grid, std::size_t idx) {
  const int half = grid.points() / 2 + 1;
  if (grid.dim() == 1) return (idx % 2 == 0) ? 1.0 : -1.0;
  const auto row = idx / static_cast<std::size_t>(half);
  const auto col = idx % static_cast<std::size_t>(half);
  return ((row + col) % 2 == 0) ? 1.0 : -1.0;
}

}  // namespace

Field synthesize_radial_kernel(const Grid& grid, const std::function<double(double)>& multiplier) {
  Spectrum spec(grid.spectral_size());
  const auto k2 = grid.wavenumber_squared();
  // Torus kernel: L^-n sum_xi m(xi) e^{i xi x}; the inverse DFT supplies 1/N^n.
  const double scale = static_cast<double>(grid.size()) / std::pow(grid.length(), grid.dim());
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] = scale * centring_sign(grid, i) * multiplier(k2[i]);
  return inverse(spec, grid);
}

Field synthesize_gradient_kernel(const Grid& grid, int axis, const std::function<double(double)>& multiplier) {
  if (axis < 0 || axis >= grid.dim()) fail(ErrorKind::IndexOutOfRange, "gradient axis out of range");
  Spectrum spec(grid.spectral_size());
  const auto k2 = grid.wavenumber_squared();
  const auto k = grid.wavevector_component(axis);
  const double nyquist = grid.wavenumber(grid.points() / 2);
  const double scale = static_cast<double>(grid.size()) / std::pow(grid.length(), grid.dim());
  for (std::size_t i = 0; i < spec.size(); ++i) {
    if (k[i] == nyquist) continue;
    spec[i] = std::complex<double>(0.0, k[i]) * (scale * centring_sign(grid, i) * multiplier(k2[i]));
  }
  return inverse(spec, grid);
}

}  // namespace rdb
