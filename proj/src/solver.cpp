#include "rdb/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "rdb/error.hpp"
#include "rdb/operators.hpp"
#include "rdb/spectral.hpp"

namespace rdb {

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Completed: return "completed";
    case RunStatus::BlowUp: return "blow-up-detected";
    case RunStatus::Instability: return "instability";
  }
  return "unknown";
}

InitialData make_initial_data(const SystemSpec& spec, const Grid& grid, const InitialSpec& init) {
  spec.validate();
  if (!(init.width > 0.0)) fail(ErrorKind::InvalidArgument, "bump width must be positive");
  std::mt19937_64 rng(init.seed);
  auto profile = [&](double level) -> Field {
    switch (init.profile) {
      case InitialProfile::Constant: return Field::constant(grid, level);
      case InitialProfile::Bump: {
        const double w2 = init.width * init.width;
        return Field::sample(grid, [&](std::span<const double> x) {
          double r2 = 0.0;
          for (double c : x) r2 += c * c;
          return level * std::exp(-0.5 * r2 / w2);
        });
      }
      case InitialProfile::Random: {
        // (1 + normalized cosine sum) / 2 stays in [0, 1].
        std::uniform_int_distribution<int> index(-4, 4);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
        const double base = 2.0 * std::numbers::pi / grid.length();
        struct Mode {
          double k0, k1, phase, amplitude;
        };
        std::vector<Mode> modes;
        double total = 0.0;
        for (int m = 0; m < 6; ++m) {
          Mode mode{base * index(rng), grid.dim() == 2 ? base * index(rng) : 0.0, phase(rng), unit(rng)};
          total += std::abs(mode.amplitude);
          modes.push_back(mode);
        }
        return Field::sample(grid, [&](std::span<const double> x) {
          double v = 0.0;
          for (const Mode& m : modes)
            v += m.amplitude * std::cos(m.k0 * x[0] + (x.size() > 1 ? m.k1 * x[1] : 0.0) + m.phase);
          return level * 0.5 * (1.0 + v / total);
        });
      }
    }
    return Field(grid);
  };
  InitialData data;
  for (int i = 0; i < spec.fuels(); ++i) data.fuels.push_back(profile(spec.fuel_bound));
  for (int j = 0; j < spec.products(); ++j) data.products.push_back(profile(spec.product_bound));
  return data;
}

namespace {

// Multiplies by a fixed real spectral factor.
class SpectralFactor {
 public:
  SpectralFactor(const Grid& grid, double t, double diffusivity, double s)
      : plan_(&plan_for(grid)), factor_(grid.spectral_size()), buffer_(grid.spectral_size()) {
    const auto k2 = grid.wavenumber_squared();
    for (std::size_t m = 0; m < factor_.size(); ++m) factor_[m] = std::exp(-t * diffusivity * fractional_symbol(k2[m], s));
  }

  void apply(std::vector<double>& values) {
    plan_->forward(values, buffer_);
    for (std::size_t m = 0; m < factor_.size(); ++m) buffer_[m] *= factor_[m];
    plan_->inverse(buffer_, values);
  }

 private:
  const FftPlan* plan_;
  std::vector<double> factor_;
  Spectrum buffer_;
};

struct Failure {
  RunStatus status = RunStatus::Completed;
  std::string message;
};

class Stepper {
 public:
  Stepper(const SystemSpec& spec, const InitialData& init, const SimulationOptions& options)
      : spec_(spec), options_(options), grid_(init.fuels.front().grid), u_(spec.fuels()), v_(spec.products()) {
    for (int i = 0; i < spec.fuels(); ++i) {
      u_[i] = init.fuels[i].values;
      half_u_.emplace_back(grid_, 0.5 * options.dt, spec.fuel_diffusivity[i], spec.order);
    }
    for (int j = 0; j < spec.products(); ++j) {
      v_[j] = init.products[j].values;
      half_v_.emplace_back(grid_, 0.5 * options.dt, spec.product_diffusivity[j], spec.order);
    }
  }

  Failure step(RunStats& stats) {
    for (std::size_t i = 0; i < u_.size(); ++i) half_u_[i].apply(u_[i]);
    for (std::size_t j = 0; j < v_.size(); ++j) half_v_[j].apply(v_[j]);
    react();
    if (Failure f = inspect(stats, false); f.status != RunStatus::Completed) return f;
    for (std::size_t i = 0; i < u_.size(); ++i) half_u_[i].apply(u_[i]);
    for (std::size_t j = 0; j < v_.size(); ++j) half_v_[j].apply(v_[j]);
    return inspect(stats, true);
  }

  void record(Trajectory& traj, double t) const {
    const int mf = spec_.fuels();
    const int np = spec_.products();
    std::vector<Field> p(mf, Field(grid_)), f(np, Field(grid_));
    std::vector<double> ua(mf), va(np);
    for (std::size_t pt = 0; pt < grid_.size(); ++pt) {
      gather(pt, ua, va);
      for (int i = 0; i < mf; ++i) p[i][pt] = spec_.nonlinearity.consumption[i](ua, va);
      for (int j = 0; j < np; ++j) f[j][pt] = spec_.nonlinearity.production[j](ua, va);
    }
    for (int i = 0; i < mf; ++i) {
      traj.fuels[i].append(t, Field(grid_, u_[i]));
      traj.consumption[i].append(t, std::move(p[i]));
    }
    for (int j = 0; j < np; ++j) {
      traj.products[j].append(t, Field(grid_, v_[j]));
      traj.production[j].append(t, std::move(f[j]));
    }
  }

  Failure inspect(RunStats& stats, bool update_stats) {
    const double tol = options_.clip_tolerance;
    Failure failure;
    auto scan = [&](std::vector<double>& values, double& lo, double& hi) {
      for (double& x : values) {
        if (std::isnan(x)) {
          failure = {RunStatus::Instability, "NaN encountered"};
          return false;
        }
        if (x > options_.ceiling) {
          std::ostringstream os;
          os << "value " << x << " exceeds ceiling " << options_.ceiling;
          failure = {RunStatus::BlowUp, os.str()};
          return false;
        }
        if (x < 0.0) {
          if (x < -tol) {
            std::ostringstream os;
            os << "negative value " << x << " below clip tolerance";
            failure = {RunStatus::Instability, os.str()};
            return false;
          }
          ++stats.clipped_values;
          stats.deepest_clip = std::min(stats.deepest_clip, x);
          x = 0.0;
        }
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
      return true;
    };
    double ulo = HUGE_VAL, uhi = -HUGE_VAL, vlo = HUGE_VAL, vhi = -HUGE_VAL;
    for (auto& values : u_)
      if (!scan(values, ulo, uhi)) return failure;
    for (auto& values : v_)
      if (!scan(values, vlo, vhi)) return failure;
    if (update_stats) {
      stats.fuel_max = std::max(stats.fuel_max, uhi);
      stats.fuel_min = std::min(stats.fuel_min, ulo);
      stats.product_max = std::max(stats.product_max, vhi);
      stats.product_min = std::min(stats.product_min, vlo);
    }
    return failure;
  }

 private:
  void gather(std::size_t pt, std::vector<double>& ua, std::vector<double>& va) const {
    for (std::size_t i = 0; i < u_.size(); ++i) ua[i] = u_[i][pt];
    for (std::size_t j = 0; j < v_.size(); ++j) va[j] = v_[j][pt];
  }

  // Heun step of U' = -p(U, V), V' = f(U, V) at every point. Rates are only
  // defined on the nonnegative orthant, so the predictor is evaluated clamped.
  void react() {
    const int mf = spec_.fuels();
    const int np = spec_.products();
    const double dt = options_.dt;
    const auto& nl = spec_.nonlinearity;
    std::vector<double> ua(mf), va(np), us(mf), vs(np), ku(mf), kv(np);
    for (std::size_t pt = 0; pt < grid_.size(); ++pt) {
      gather(pt, ua, va);
      for (int i = 0; i < mf; ++i) ku[i] = -nl.consumption[i](ua, va);
      for (int j = 0; j < np; ++j) kv[j] = nl.production[j](ua, va);
      for (int i = 0; i < mf; ++i) us[i] = std::max(0.0, ua[i] + dt * ku[i]);
      for (int j = 0; j < np; ++j) vs[j] = std::max(0.0, va[j] + dt * kv[j]);
      for (int i = 0; i < mf; ++i) u_[i][pt] = ua[i] + 0.5 * dt * (ku[i] - nl.consumption[i](us, vs));
      for (int j = 0; j < np; ++j) v_[j][pt] = va[j] + 0.5 * dt * (kv[j] + nl.production[j](us, vs));
    }
  }

  const SystemSpec& spec_;
  const SimulationOptions& options_;
  Grid grid_;
  std::vector<std::vector<double>> u_;
  std::vector<std::vector<double>> v_;
  std::vector<SpectralFactor> half_u_;
  std::vector<SpectralFactor> half_v_;
};

void check_initial(const SystemSpec& spec, const InitialData& init) {
  if (init.fuels.size() != static_cast<std::size_t>(spec.fuels()) ||
      init.products.size() != static_cast<std::size_t>(spec.products()))
    fail(ErrorKind::InvalidArgument, "initial data must provide one field per species");
  const Grid& grid = init.fuels.front().grid;
  auto within = [&](const Field& f, double bound, const char* what) {
    if (!(f.grid == grid)) fail(ErrorKind::InvalidArgument, "initial fields must share one grid");
    const double slack = 1e-12 * std::max(1.0, bound);
    if (!f.all_finite() || f.min() < -slack || f.max() > bound + slack)
      fail(ErrorKind::PreconditionViolation, std::string(what) + " initial data outside [0, bound]");
  };
  for (const Field& f : init.fuels) within(f, spec.fuel_bound, "fuel");
  for (const Field& f : init.products) within(f, spec.product_bound, "product");
}

}  // namespace

Trajectory simulate(const SystemSpec& spec, const InitialData& init, const SimulationOptions& options) {
  spec.validate();
  check_initial(spec, init);
  if (!(options.dt > 0.0) || !(options.horizon > 0.0))
    fail(ErrorKind::InvalidArgument, "horizon and dt must be positive");
  if (options.stride < 1) fail(ErrorKind::InvalidArgument, "frame stride must be at least 1");
  if (!(options.clip_tolerance >= 0.0) || !(options.ceiling > 0.0))
    fail(ErrorKind::InvalidArgument, "clip tolerance and ceiling must be positive");
  const long steps = std::lround(options.horizon / options.dt);
  if (steps < 1 || std::abs(static_cast<double>(steps) * options.dt - options.horizon) > 1e-9 * options.horizon)
    fail(ErrorKind::InvalidArgument, "horizon must be a whole number of steps");
  if (steps % options.stride != 0) fail(ErrorKind::InvalidArgument, "step count must be a multiple of the stride");

  const Grid& grid = init.fuels.front().grid;
  Trajectory traj;
  traj.spec = spec;
  traj.dt = options.dt;
  traj.stride = options.stride;
  for (int i = 0; i < spec.fuels(); ++i) {
    traj.fuels.emplace_back(grid);
    traj.consumption.emplace_back(grid);
  }
  for (int j = 0; j < spec.products(); ++j) {
    traj.products.emplace_back(grid);
    traj.production.emplace_back(grid);
  }

  Stepper stepper(spec, init, options);
  traj.stats.fuel_min = HUGE_VAL;
  traj.stats.product_min = HUGE_VAL;
  traj.stats.fuel_max = -HUGE_VAL;
  traj.stats.product_max = -HUGE_VAL;
  if (Failure f = stepper.inspect(traj.stats, true); f.status != RunStatus::Completed)
    fail(ErrorKind::PreconditionViolation, "initial data rejected: " + f.message);
  stepper.record(traj, 0.0);
  traj.horizon = 0.0;

  for (long n = 1; n <= steps; ++n) {
    Failure f = stepper.step(traj.stats);
    if (f.status != RunStatus::Completed) {
      std::ostringstream os;
      os << f.message << " at t = " << static_cast<double>(n) * options.dt;
      if (options.on_failure == BlowUpPolicy::Throw)
        fail(f.status == RunStatus::BlowUp ? ErrorKind::BlowUpDetected : ErrorKind::Instability, os.str());
      traj.status = f.status;
      traj.message = os.str();
      return traj;
    }
    ++traj.stats.steps;
    if (n % options.stride == 0) {
      const double t = static_cast<double>(n) * options.dt;
      stepper.record(traj, t);
      traj.horizon = t;
    }
  }
  return traj;
}

const SpaceTimeField& AuxiliarySet::at(int i, int j) const {
  if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= cross.size() || static_cast<std::size_t>(j) >= cross[i].size())
    fail(ErrorKind::IndexOutOfRange, "auxiliary index out of range");
  return cross[i][j];
}

AuxiliarySet duhamel_split(const Trajectory& traj, bool with_doubled) {
  const SystemSpec& spec = traj.spec;
  AuxiliarySet aux;
  aux.fuel_diffusivity = spec.fuel_diffusivity;
  aux.product_diffusivity = spec.product_diffusivity;
  aux.order = spec.order;
  const double s = spec.order;
  for (int i = 0; i < spec.fuels(); ++i)
    aux.fuel.push_back(solve_forced_heat(traj.consumption[i], spec.fuel_diffusivity[i], s));
  for (int j = 0; j < spec.products(); ++j)
    aux.product.push_back(solve_forced_heat(traj.production[j], spec.product_diffusivity[j], s));
  aux.cross.resize(spec.fuels());
  for (int i = 0; i < spec.fuels(); ++i) {
    for (int j = 0; j < spec.products(); ++j) {
      const double kappa = spec.product_diffusivity[j];
      // Equal diffusivities give the same discrete equation.
      aux.cross[i].push_back(kappa == spec.fuel_diffusivity[i] ? aux.fuel[i]
                                                               : solve_forced_heat(traj.consumption[i], kappa, s));
    }
  }
  if (with_doubled) {
    aux.doubled.resize(spec.fuels());
    for (int i = 0; i < spec.fuels(); ++i)
      for (int j = 0; j < spec.products(); ++j)
        aux.doubled[i].push_back(solve_forced_heat(traj.consumption[i], 2.0 * spec.product_diffusivity[j], s));
  }
  return aux;
}

SpaceTimeField free_evolution(const SpaceTimeField& f, double diffusivity, double s) {
  if (f.empty()) fail(ErrorKind::TooFewFrames, "no initial frame");
  SpaceTimeField out(f.grid);
  const double t0 = f.times.front();
  for (double t : f.times) out.append(t, apply_semigroup(f.frames.front(), t - t0, diffusivity, s));
  return out;
}

double ReconstructionResidual::max() const {
  double r = 0.0;
  for (double x : fuel) r = std::max(r, x);
  for (double x : product) r = std::max(r, x);
  return r;
}

ReconstructionResidual reconstruction_residual(const Trajectory& traj, const AuxiliarySet& aux) {
  const SystemSpec& spec = traj.spec;
  ReconstructionResidual r;
  for (int i = 0; i < spec.fuels(); ++i) {
    const SpaceTimeField free = free_evolution(traj.fuels[i], spec.fuel_diffusivity[i], spec.order);
    double worst = 0.0;
    for (std::size_t k = 0; k < free.frame_count(); ++k)
      worst = std::max(worst, max_abs_difference(traj.fuels[i].frames[k], free.frames[k] - aux.fuel[i].frames[k]));
    r.fuel.push_back(worst);
  }
  for (int j = 0; j < spec.products(); ++j) {
    const SpaceTimeField free = free_evolution(traj.products[j], spec.product_diffusivity[j], spec.order);
    double worst = 0.0;
    for (std::size_t k = 0; k < free.frame_count(); ++k)
      worst = std::max(worst, max_abs_difference(traj.products[j].frames[k], free.frames[k] + aux.product[j].frames[k]));
    r.product.push_back(worst);
  }
  return r;
}

double stoichiometric_excess(const Trajectory& traj, const AuxiliarySet& aux, int j) {
  const SystemSpec& spec = traj.spec;
  if (j < 0 || j >= spec.products()) fail(ErrorKind::IndexOutOfRange, "product index out of range");
  const auto& a = spec.nonlinearity.stoichiometry[j];
  double worst = -HUGE_VAL;
  const SpaceTimeField& h = aux.product[j];
  for (std::size_t k = 0; k < h.frame_count(); ++k) {
    for (std::size_t p = 0; p < h.grid.size(); ++p) {
      double bound = 0.0;
      for (int i = 0; i < spec.fuels(); ++i) bound += a[i] * aux.at(i, j).frames[k][p];
      worst = std::max(worst, h.frames[k][p] - bound);
    }
  }
  return worst;
}

double decomposition_residual(const AuxiliarySet& aux, int i, int j) {
  const SpaceTimeField& h = aux.at(i, j);
  const SpaceTimeField& f = aux.fuel[i];
  const double kappa = aux.product_diffusivity[j];
  const double eta = aux.fuel_diffusivity[i];
  const SpaceTimeField t = apply_T(f, kappa, aux.order).phi;
  double worst = 0.0;
  for (std::size_t k = 0; k < h.frame_count(); ++k) {
    for (std::size_t p = 0; p < h.grid.size(); ++p)
      worst = std::max(worst, std::abs(h.frames[k][p] - f.frames[k][p] - (kappa - eta) * t.frames[k][p]));
  }
  return worst;
}

double goodbad_alpha(double kappa, double eta, int m, int dim) {
  return std::pow(eta / kappa, 0.5 * dim) * std::exp(static_cast<double>(m) * m * std::abs(kappa - eta) / kappa);
}

double goodbad_beta(double kappa, int m, int dim) {
  return std::pow(2.0, 0.5 * dim) * std::exp(-static_cast<double>(m) * m / (8.0 * kappa));
}

namespace {

constexpr double kTailWidths = 12.0;  // Gaussian mass beyond 12 sigma is below e^-72

// Weights a_q = integral of hat_q(y) g_sigma(y) over y in [lo, hi], where hat_q is
// the piecewise-linear basis function centred at q dx. Returned for q in [first, first + size).
struct HatWeights {
  long first = 0;
  std::vector<double> a;
};

HatWeights hat_weights(double dx, double sigma, double lo, double hi) {
  HatWeights w;
  if (!(hi > lo)) return w;
  const long q_lo = static_cast<long>(std::floor(lo / dx)) - 1;
  const long q_hi = static_cast<long>(std::ceil(hi / dx)) + 1;
  w.first = q_lo;
  w.a.assign(static_cast<std::size_t>(q_hi - q_lo + 1), 0.0);
  const double inv = 1.0 / (sigma * std::numbers::sqrt2);
  const double dens = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
  auto g0 = [&](double y) { return 0.5 * std::erf(y * inv); };
  auto g1 = [&](double y) { return -sigma * sigma * dens * std::exp(-y * y * inv * inv); };
  double y_prev = std::clamp(static_cast<double>(q_lo) * dx, lo, hi);
  double p0 = g0(y_prev);
  double p1 = g1(y_prev);
  for (long q = q_lo + 1; q <= q_hi; ++q) {
    const double y = std::clamp(static_cast<double>(q) * dx, lo, hi);
    const double c0 = g0(y);
    const double c1 = g1(y);
    if (y > y_prev) {
      const double d0 = c0 - p0;
      const double d1 = c1 - p1;
      const double left = static_cast<double>(q - 1) * dx;
      // (y - left)/dx rises for hat_q; (left + dx - y)/dx falls for hat_{q-1}.
      const double rise = (d1 - left * d0) / dx;
      w.a[static_cast<std::size_t>(q - q_lo)] += rise;
      w.a[static_cast<std::size_t>(q - 1 - q_lo)] += d0 - rise;
    }
    y_prev = y;
    p0 = c0;
    p1 = c1;
  }
  return w;
}

std::size_t wrap(long q, int n) {
  const long r = q % n;
  return static_cast<std::size_t>(r < 0 ? r + n : r);
}

// Folded periodic weights of the lag-tau heat kernel cut to |y| <= radius
// (radius = infinity for no cut), integrated against hat functions.
Field cone_weights(const Grid& grid, double sigma, double radius) {
  const double dx = grid.dx();
  const int n = grid.points();
  const double reach = std::min(radius, kTailWidths * sigma);
  Field w(grid);
  if (grid.dim() == 1) {
    const HatWeights a = hat_weights(dx, sigma, -reach, reach);
    for (std::size_t k = 0; k < a.a.size(); ++k) w[wrap(a.first + static_cast<long>(k), n)] += a.a[k];
    return w;
  }
  const double full_reach = kTailWidths * sigma;
  const HatWeights a = hat_weights(dx, sigma, -full_reach, full_reach);
  const bool cut = radius < full_reach;
  const double dens2 = 1.0 / (2.0 * std::numbers::pi * sigma * sigma);
  const int sub = std::clamp(static_cast<int>(std::ceil(8.0 * dx / sigma)), 8, 64);
  for (std::size_t k0 = 0; k0 < a.a.size(); ++k0) {
    const long q0 = a.first + static_cast<long>(k0);
    for (std::size_t k1 = 0; k1 < a.a.size(); ++k1) {
      const long q1 = a.first + static_cast<long>(k1);
      double value = a.a[k0] * a.a[k1];
      if (cut) {
        const double c0 = static_cast<double>(q0) * dx;
        const double c1 = static_cast<double>(q1) * dx;
        const double near0 = std::max(0.0, std::abs(c0) - dx);
        const double near1 = std::max(0.0, std::abs(c1) - dx);
        const double far0 = std::abs(c0) + dx;
        const double far1 = std::abs(c1) + dx;
        if (near0 * near0 + near1 * near1 > radius * radius) {
          value = 0.0;
        } else if (far0 * far0 + far1 * far1 > radius * radius) {
          // Support crosses the cut: midpoint rule on a sub x sub lattice.
          const double step = 2.0 * dx / sub;
          value = 0.0;
          for (int i0 = 0; i0 < sub; ++i0) {
            const double y0 = c0 - dx + (i0 + 0.5) * step;
            const double h0 = 1.0 - std::abs(y0 - c0) / dx;
            for (int i1 = 0; i1 < sub; ++i1) {
              const double y1 = c1 - dx + (i1 + 0.5) * step;
              const double r2 = y0 * y0 + y1 * y1;
              if (r2 > radius * radius) continue;
              const double h1 = 1.0 - std::abs(y1 - c1) / dx;
              value += h0 * h1 * dens2 * std::exp(-0.5 * r2 / (sigma * sigma));
            }
          }
          value *= step * step;
        }
      }
      if (value != 0.0) w[wrap(q0, n) * static_cast<std::size_t>(n) + wrap(q1, n)] += value;
    }
  }
  return w;
}

std::size_t frame_index(const SpaceTimeField& f, double t) {
  const double h = f.frame_count() > 1 ? f.spacing() : 1.0;
  for (std::size_t k = 0; k < f.frame_count(); ++k)
    if (std::abs(f.times[k] - t) <= 1e-9 * h) return k;
  fail(ErrorKind::PreconditionViolation, "evaluation time is not a stored frame");
}

}  // namespace

GoodBadSplit good_bad_split(const Trajectory& traj, int i, int j, int m, std::span<const double> times) {
  const SystemSpec& spec = traj.spec;
  if (i < 0 || i >= spec.fuels() || j < 0 || j >= spec.products())
    fail(ErrorKind::IndexOutOfRange, "species index out of range");
  if (m < 1) fail(ErrorKind::PreconditionViolation, "cone parameter m must be at least 1");
  if (spec.order != 1.0) fail(ErrorKind::PreconditionViolation, "the cone split uses the Gaussian heat kernel (s = 1)");
  const SpaceTimeField& p = traj.consumption[i];
  p.require_uniform();
  const Grid& grid = p.grid;
  const int dim = grid.dim();
  const double kappa = spec.product_diffusivity[j];
  const double eta = spec.fuel_diffusivity[i];
  const double h = p.spacing();

  GoodBadSplit split{m, goodbad_alpha(kappa, eta, m, dim), goodbad_beta(kappa, m, dim), SpaceTimeField(grid),
                     SpaceTimeField(grid), SpaceTimeField(grid)};
  // Ball mass of the lag-tau kernel, independent of tau.
  const double ball_mass =
      dim == 1 ? std::erf(m / (2.0 * std::sqrt(kappa))) : -std::expm1(-static_cast<double>(m) * m / (4.0 * kappa));

  std::vector<Spectrum> p_hat(p.frame_count());
  const FftPlan& plan = plan_for(grid);
  for (double t : times) {
    const std::size_t last = frame_index(p, t);
    if (last == 0) {
      split.good.append(t, Field(grid));
      split.bad.append(t, Field(grid));
      split.total.append(t, Field(grid));
      continue;
    }
    if (last < 3) fail(ErrorKind::QuadratureUnderresolved, "need at least four frames before the evaluation time");
    Spectrum good(grid.spectral_size(), {0.0, 0.0});
    Spectrum total(grid.spectral_size(), {0.0, 0.0});
    Spectrum w_hat(grid.spectral_size());
    for (std::size_t k = 0; k < last; ++k) {
      if (p_hat[k].empty()) p_hat[k] = forward(p.frames[k]);
      const double weight = k == 0 ? 0.5 * h : h;
      const double tau = p.times[last] - p.times[k];
      const double sigma = std::sqrt(2.0 * kappa * tau);
      const Field g = cone_weights(grid, sigma, m * std::sqrt(tau));
      plan.forward(g.values, w_hat);
      for (std::size_t q = 0; q < w_hat.size(); ++q) good[q] += weight * w_hat[q] * p_hat[k][q];
      const Field f = cone_weights(grid, sigma, HUGE_VAL);
      plan.forward(f.values, w_hat);
      for (std::size_t q = 0; q < w_hat.size(); ++q) total[q] += weight * w_hat[q] * p_hat[k][q];
    }
    Field g_field = inverse(good, grid);
    Field t_field = inverse(total, grid);
    // Zero lag: the kernel collapses onto p itself.
    for (std::size_t q = 0; q < grid.size(); ++q) {
      g_field[q] += 0.5 * h * ball_mass * p.frames[last][q];
      t_field[q] += 0.5 * h * p.frames[last][q];
    }
    split.bad.append(t, t_field - g_field);
    split.good.append(t, std::move(g_field));
    split.total.append(t, std::move(t_field));
  }
  return split;
}

GoodBadCheck check_good_bad(const GoodBadSplit& split, const AuxiliarySet& aux, int i, int j, double fuel_bound) {
  if (aux.doubled.empty()) fail(ErrorKind::PreconditionViolation, "auxiliary set lacks the doubled-diffusivity solves");
  const SpaceTimeField& h = aux.at(i, j);
  const SpaceTimeField& w = aux.doubled[i][j];
  const SpaceTimeField& f = aux.fuel[i];
  const double kappa = aux.product_diffusivity[j];
  const double eta = aux.fuel_diffusivity[i];
  const SpaceTimeField t2 = apply_T(f, 2.0 * kappa, aux.order).phi;

  GoodBadCheck c;
  c.m = split.m;
  c.alpha = split.alpha;
  c.beta = split.beta;
  c.good_excess = -HUGE_VAL;
  c.bad_excess = -HUGE_VAL;
  c.combined_excess = -HUGE_VAL;
  double mismatch = 0.0;
  double h_max = 0.0;
  for (std::size_t e = 0; e < split.good.frame_count(); ++e) {
    const std::size_t k = frame_index(h, split.good.times[e]);
    for (std::size_t p = 0; p < h.grid.size(); ++p) {
      const double hg = split.good.frames[e][p];
      const double hb = split.bad.frames[e][p];
      const double hv = h.frames[k][p];
      c.good_excess = std::max(c.good_excess, hg - c.alpha * fuel_bound);
      c.bad_excess = std::max(c.bad_excess, hb - c.beta * w.frames[k][p]);
      const double rhs = (c.alpha + c.beta) * fuel_bound + (2.0 * kappa - eta) * c.beta * t2.frames[k][p];
      c.combined_excess = std::max(c.combined_excess, hv - rhs);
      mismatch = std::max(mismatch, std::abs(hg + hb - hv));
      h_max = std::max(h_max, std::abs(hv));
    }
  }
  c.total_mismatch = h_max > 0.0 ? mismatch / h_max : mismatch;
  return c;
}

}  // namespace rdb
