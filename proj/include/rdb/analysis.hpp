#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "rdb/grid.hpp"

namespace rdb {

struct Trajectory;

/// Space-time cylinder {|x - x0| < R, |t - t0| < R^{2s}}; s = 1 is the parabolic case.
struct ParabolicCylinder {
  double t0 = 0.0;
  std::array<double, 2> x0{0.0, 0.0};
  double radius = 1.0;
  double s = 1.0;

  double half_height() const;
};

/// Midpoint-rule average over the samples strictly inside the cylinder.
double cylinder_average(const SpaceTimeField& f, const ParabolicCylinder& q);

/// Mean absolute deviation from the cylinder average.
double mean_oscillation(const SpaceTimeField& f, const ParabolicCylinder& q);

struct CylinderFamily {
  std::vector<ParabolicCylinder> cylinders;
  std::string description;
};

/// Dyadic radii from 4 dx up to min(L/4, sqrt(T)) for s = 1 or min(L/4, T^{1/(2s)}/2)
/// for s < 1. Centres sit on a lattice with time step R^{2s} and space step R, keep
/// the cylinder inside [t_min, T] and inside the fundamental cell. At most
/// `per_radius_cap` cylinders per radius, thinned with a uniform stride.
CylinderFamily standard_family(const SpaceTimeField& f, double s, double t_min = 1.0,
                               double t_max = -1.0, std::size_t per_radius_cap = 20000);

struct SeminormResult {
  double value = 0.0;
  ParabolicCylinder worst;
  std::size_t cylinder_count = 0;
};

/// Largest mean oscillation over the family.
SeminormResult pbmo_seminorm(const SpaceTimeField& f, const CylinderFamily& family);

/// Cylinder average of exp(sum_j z_j v_j).
double exp_moment(std::span<const SpaceTimeField> fields, std::span<const double> weights,
                  const ParabolicCylinder& q);
/// Cylinder average of exp(r v^rho); negative samples are treated as zero.
double subexp_moment(const SpaceTimeField& v, double r, double rho, const ParabolicCylinder& q);

/// `count` unit cylinders with centres t0 spread over (1, T - 1] and x0 spread
/// over the cell by a golden-ratio sequence.
std::vector<ParabolicCylinder> unit_cylinders(const SpaceTimeField& f, double s, int count);

struct MomentReport {
  std::vector<ParabolicCylinder> cylinders;
  std::vector<double> values;
  double max = 0.0;
  double min = 0.0;
  bool passed = false;
};

MomentReport exp_moment_report(std::span<const SpaceTimeField> fields, std::span<const double> weights,
                               const std::vector<ParabolicCylinder>& cylinders);
MomentReport subexp_moment_report(const SpaceTimeField& v, double r, double rho,
                                  const std::vector<ParabolicCylinder>& cylinders);

struct TailCurve {
  std::vector<double> levels;
  std::vector<double> measures;
  std::size_t sample_count = 0;
  double mean_oscillation = 0.0;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int fitted_points = 0;
  bool degenerate = false;
};

/// Normalized level-set measures of |f - f_Q| on Q and the least-squares slope of
/// log(measure) against level over measures in [1e-4, 0.5]. A field with zero
/// oscillation on Q is reported as degenerate with slope -infinity.
TailCurve jn_tail(const SpaceTimeField& f, const ParabolicCylinder& q, std::span<const double> levels);

/// 24 levels, geometric from 0.1 to 10 times the seminorm estimate.
std::vector<double> default_jn_levels(double seminorm_estimate);

struct TimelinePoint {
  double t;
  double sup;
};

/// Per-frame maximum over space and over all fields.
std::vector<TimelinePoint> sup_timeline(std::span<const SpaceTimeField> fields);
std::vector<TimelinePoint> sup_timeline(const Trajectory& traj);

/// Largest timeline value with t in [t_lo, t_hi].
double timeline_max(const std::vector<TimelinePoint>& timeline, double t_lo, double t_hi);

/// Copy of the frames with times in [t_lo, t_hi].
SpaceTimeField restrict_time(const SpaceTimeField& f, double t_lo, double t_hi);

}  // namespace rdb
