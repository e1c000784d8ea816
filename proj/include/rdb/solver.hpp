#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rdb/grid.hpp"
#include "rdb/systems.hpp"
#include "rdb/trajectory.hpp"

namespace rdb {

struct InitialData {
  std::vector<Field> fuels;
  std::vector<Field> products;
};

enum class InitialProfile { Bump, Random, Constant };

struct InitialSpec {
  InitialProfile profile = InitialProfile::Bump;
  double width = 2.0;  ///< bump standard deviation
  std::uint64_t seed = 1;
};

/// Fuels scaled to K1 and products to K2: a Gaussian bump at the origin, a smooth
/// random profile with values in [0, K], or the constant K.
InitialData make_initial_data(const SystemSpec& spec, const Grid& grid, const InitialSpec& init);

enum class BlowUpPolicy { Throw, Stop };

struct SimulationOptions {
  double horizon = 1.0;
  double dt = 1e-3;
  int stride = 1;  ///< store every stride-th step
  double clip_tolerance = 1e-8;
  double ceiling = 1e6;
  BlowUpPolicy on_failure = BlowUpPolicy::Throw;
};

/// Strang splitting: exact semigroup half step, Heun reaction step, semigroup
/// half step. Values in [-clip_tolerance, 0) are clipped to zero; anything below is
/// an instability, as is a NaN. A value above the ceiling is a blow-up. With
/// BlowUpPolicy::Stop the frames stored so far are returned with the status set.
Trajectory simulate(const SystemSpec& spec, const InitialData& init, const SimulationOptions& options);

/// Solutions of the forced heat equations driven by the recorded reaction terms,
/// all starting from zero on the stored-frame lattice.
struct AuxiliarySet {
  std::vector<SpaceTimeField> fuel;                   ///< F_i: diffusivity eta_i, forcing p_i
  std::vector<SpaceTimeField> product;                ///< H_j: diffusivity kappa_j, forcing f_j
  std::vector<std::vector<SpaceTimeField>> cross;     ///< H_ij: diffusivity kappa_j, forcing p_i; [i][j]
  std::vector<std::vector<SpaceTimeField>> doubled;   ///< W_ij: diffusivity 2 kappa_j, forcing p_i; optional
  std::vector<double> fuel_diffusivity;
  std::vector<double> product_diffusivity;
  double order = 1.0;

  const SpaceTimeField& at(int i, int j) const;
};

AuxiliarySet duhamel_split(const Trajectory& traj, bool with_doubled = false);

/// Semigroup evolution of the initial frame on the trajectory's lattice.
SpaceTimeField free_evolution(const SpaceTimeField& f, double diffusivity, double s);

struct ReconstructionResidual {
  std::vector<double> fuel;     ///< max |u_i - (e^{t eta} u_i0 - F_i)|
  std::vector<double> product;  ///< max |v_j - (e^{t kappa} v_j0 + H_j)|
  double max() const;
};

ReconstructionResidual reconstruction_residual(const Trajectory& traj, const AuxiliarySet& aux);

/// max over frames of H_j - sum_i A_ji H_ij (nonpositive when the bound holds).
double stoichiometric_excess(const Trajectory& traj, const AuxiliarySet& aux, int j);

/// max |H_ij - F_i - (kappa_j - eta_i) T_{kappa_j} F_i| over the horizon.
double decomposition_residual(const AuxiliarySet& aux, int i, int j);

double goodbad_alpha(double kappa, double eta, int m, int dim);
double goodbad_beta(double kappa, int m, int dim);

/// Cone split of H_ij at selected frame times by trapezoid quadrature over the
/// stored frames. Each frame contributes the heat kernel at lag t - s, cut to the
/// ball of radius m sqrt(t - s), integrated exactly against the piecewise-linear
/// interpolant of p_i. `total` is the same quadrature with no cut.
struct GoodBadSplit {
  int m = 1;
  double alpha = 0.0;
  double beta = 0.0;
  SpaceTimeField good;
  SpaceTimeField bad;
  SpaceTimeField total;
};

GoodBadSplit good_bad_split(const Trajectory& traj, int i, int j, int m, std::span<const double> times);

struct GoodBadCheck {
  int m = 1;
  double alpha = 0.0;
  double beta = 0.0;
  double good_excess = 0.0;   ///< max H_g - alpha K1
  double bad_excess = 0.0;    ///< max H_b - beta W
  double combined_excess = 0.0;  ///< max H - (alpha + beta) K1 - (2 kappa - eta) beta T_{2 kappa} F
  double total_mismatch = 0.0;  ///< max |H_g + H_b - H| relative to max |H|
};

/// Compares the split with the stepper's H_ij, W_ij and F_i at the split's times.
GoodBadCheck check_good_bad(const GoodBadSplit& split, const AuxiliarySet& aux, int i, int j, double fuel_bound);

}  // namespace rdb
