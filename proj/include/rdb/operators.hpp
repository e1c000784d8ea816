#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "rdb/analysis.hpp"
#include "rdb/grid.hpp"

namespace rdb {

enum class OperatorMethod { PdeSolve, JDerivative, DirectKernel };

std::string_view to_string(OperatorMethod method);

struct OperatorResult {
  SpaceTimeField phi;
  std::optional<SpaceTimeField> j;
  OperatorMethod method = OperatorMethod::PdeSolve;
};

/// Solves y' = -kappa |xi|^{2s} y + sigma(|xi|^2) F_hat mode by mode with y(0) = 0.
/// The forcing is taken linear in time between frames and integrated exactly, so
/// the output shares the forcing's lattice, which must be uniform and start at 0.
SpaceTimeField integrate_forced(const SpaceTimeField& forcing, double kappa, double s,
                                const std::function<double(double)>& source_symbol);

/// J with dJ/dt + kappa (-Laplacian)^s J = F and J(0) = 0.
SpaceTimeField solve_forced_heat(const SpaceTimeField& forcing, double kappa, double s);

/// Phi with dPhi/dt + kappa (-Laplacian)^s Phi = -(-Laplacian)^s F and Phi(0) = 0.
OperatorResult apply_T(const SpaceTimeField& forcing, double kappa, double s);

/// Phi = (dJ/dt - F) / kappa with second-order differences in time.
OperatorResult apply_T_via_J(const SpaceTimeField& forcing, double kappa, double s);

/// Second-order time derivative: centred inside, one-sided at both ends.
SpaceTimeField time_derivative(const SpaceTimeField& f);

struct L2BoundReport {
  double ratio = 0.0;  ///< kappa |Phi|_2 / |F|_2, 0 for zero forcing
  double forcing_norm = 0.0;
  double output_norm = 0.0;
  double tolerance = 1e-6;

  bool passed() const noexcept { return ratio <= 1.0 + tolerance; }
};

/// Space-time L2 norms weight every frame equally, which makes the discrete
/// bound exact for the exponential integrator.
L2BoundReport check_L2_bound(const SpaceTimeField& forcing, double kappa, double s, double tolerance = 1e-6);

/// Space-time L2 norm with equal frame weights.
double space_time_l2(const SpaceTimeField& f);

struct HoelderModulus {
  double constant = 0.0;
  double alpha = 0.0;
  std::size_t pairs = 0;
  double worst_t1 = 0.0;
  double worst_t2 = 0.0;
};

/// max |J(t1,x) - J(t2,x)| / (forcing_sup |t1 - t2|^alpha) over all frames t1 and
/// the lags 2^-k max_gap (k = 0..lag_levels-1) rounded to the lattice.
HoelderModulus hoelder_time_modulus(const SpaceTimeField& j, double alpha, double forcing_sup,
                                    double max_gap = 1.0, int lag_levels = 6);

struct CylinderBoundReport {
  std::vector<double> ratios;  ///< |(Phi)_Q| / |F|_inf per cylinder
  double max_ratio = 0.0;
  double bound = 0.0;

  bool passed() const noexcept { return max_ratio <= bound; }
};

CylinderBoundReport cylinder_average_bound(const SpaceTimeField& forcing, double kappa, double s,
                                           const std::vector<ParabolicCylinder>& cylinders, double bound);

/// F = sum_k a_k cos(xi_k . x + omega_k t + phase_k) / sum_k |a_k| on frames
/// 0, dt, ..., horizon. Wavevectors are lattice modes with indices up to
/// `max_index`, frequencies lie in [0, 3]. |F| <= 1 for every lattice.
SpaceTimeField smooth_random_forcing(const Grid& grid, double horizon, double dt, std::uint64_t seed,
                                     int modes = 12, int max_index = 19);

}  // namespace rdb
