#include "rdb/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "rdb/error.hpp"
#include "rdb/trajectory.hpp"

namespace rdb {

double ParabolicCylinder::half_height() const { return s == 1.0 ? radius * radius : std::pow(radius, 2.0 * s); }

namespace {

struct CylinderSamples {
  std::vector<std::size_t> frames;
  std::vector<std::size_t> points;
};

CylinderSamples locate(const SpaceTimeField& f, const ParabolicCylinder& q) {
  if (!(q.radius > 0.0)) fail(ErrorKind::InvalidArgument, "cylinder radius must be positive");
  if (f.empty()) fail(ErrorKind::CylinderOutOfRange, "field has no frames");
  const double h = q.half_height();
  const double t_first = f.times.front(), t_last = f.times.back();
  const double slack = 1e-9 * std::max(1.0, std::abs(t_last));
  if (q.t0 - h < t_first - slack || q.t0 + h > t_last + slack)
    fail(ErrorKind::CylinderOutOfRange, "cylinder leaves the recorded time range");
  const Grid& g = f.grid;
  const double half = 0.5 * g.length();
  for (int d = 0; d < g.dim(); ++d) {
    if (q.x0[d] - q.radius < -half - 1e-12 * half || q.x0[d] + q.radius > half + 1e-12 * half)
      fail(ErrorKind::CylinderOutOfRange, "cylinder ball leaves the fundamental cell");
  }

  CylinderSamples out;
  for (std::size_t k = 0; k < f.times.size(); ++k)
    if (std::abs(f.times[k] - q.t0) < h) out.frames.push_back(k);

  const double dx = g.dx();
  const int n = g.points();
  auto index_range = [&](double c) {
    const int lo = std::max(0, static_cast<int>(std::ceil((c - q.radius + half) / dx)));
    const int hi = std::min(n - 1, static_cast<int>(std::floor((c + q.radius + half) / dx)));
    return std::pair{lo, hi};
  };
  const double r2 = q.radius * q.radius;
  if (g.dim() == 1) {
    const auto [lo, hi] = index_range(q.x0[0]);
    for (int i = lo; i <= hi; ++i) {
      const double d = g.coordinate(i) - q.x0[0];
      if (d * d < r2) out.points.push_back(static_cast<std::size_t>(i));
    }
  } else {
    const auto [ilo, ihi] = index_range(q.x0[0]);
    const auto [jlo, jhi] = index_range(q.x0[1]);
    for (int i = ilo; i <= ihi; ++i) {
      const double di = g.coordinate(i) - q.x0[0];
      for (int j = jlo; j <= jhi; ++j) {
        const double dj = g.coordinate(j) - q.x0[1];
        if (di * di + dj * dj < r2) out.points.push_back(static_cast<std::size_t>(i) * n + j);
      }
    }
  }
  if (out.frames.empty() || out.points.empty()) fail(ErrorKind::EmptyCylinder, "cylinder contains no samples");
  return out;
}

template <class Fn>
double average_of(const SpaceTimeField& f, const CylinderSamples& c, Fn&& fn) {
  double sum = 0.0;
  for (std::size_t k : c.frames) {
    const auto& v = f.frames[k].values;
    for (std::size_t p : c.points) sum += fn(v[p]);
  }
  return sum / static_cast<double>(c.frames.size() * c.points.size());
}

}  // namespace

double cylinder_average(const SpaceTimeField& f, const ParabolicCylinder& q) {
  const auto c = locate(f, q);
  return average_of(f, c, [](double v) { return v; });
}

double mean_oscillation(const SpaceTimeField& f, const ParabolicCylinder& q) {
  const auto c = locate(f, q);
  const double avg = average_of(f, c, [](double v) { return v; });
  return average_of(f, c, [avg](double v) { return std::abs(v - avg); });
}

CylinderFamily standard_family(const SpaceTimeField& f, double s, double t_min, double t_max,
                               std::size_t per_radius_cap) {
  if (!(s > 0.0 && s <= 1.0)) fail(ErrorKind::InvalidOrder, "cylinder order must lie in (0, 1]");
  if (f.empty()) fail(ErrorKind::EmptyFamily, "field has no frames");
  if (t_max < 0.0) t_max = f.times.back();
  t_max = std::min(t_max, f.times.back());
  t_min = std::max(t_min, f.times.front());
  const Grid& g = f.grid;
  const double horizon = t_max;
  double r_max = s == 1.0 ? std::min(g.length() / 4.0, std::sqrt(horizon))
                          : std::min(g.length() / 4.0, 0.5 * std::pow(horizon, 1.0 / (2.0 * s)));
  const double r_min = 4.0 * g.dx();
  const double half = 0.5 * g.length();

  CylinderFamily family;
  int levels = 0;
  for (double r = r_min; r <= r_max * (1 + 1e-12); r *= 2.0) {
    ParabolicCylinder proto{0.0, {0.0, 0.0}, r, s};
    const double h = proto.half_height();
    std::vector<double> t_centres;
    for (double t0 = t_min + h; t0 + h <= t_max * (1 + 1e-12); t0 += h) t_centres.push_back(t0);
    std::vector<double> x_centres;
    for (double x0 = -half + r; x0 + r <= half; x0 += r) x_centres.push_back(x0);
    if (t_centres.empty() || x_centres.empty()) continue;
    ++levels;
    const std::size_t per_time = g.dim() == 1 ? x_centres.size() : x_centres.size() * x_centres.size();
    const std::size_t total = t_centres.size() * per_time;
    const std::size_t stride = std::max<std::size_t>(1, (total + per_radius_cap - 1) / per_radius_cap);
    for (std::size_t idx = 0; idx < total; idx += stride) {
      ParabolicCylinder q = proto;
      q.t0 = t_centres[idx / per_time];
      const std::size_t spatial = idx % per_time;
      if (g.dim() == 1) {
        q.x0 = {x_centres[spatial], 0.0};
      } else {
        q.x0 = {x_centres[spatial / x_centres.size()], x_centres[spatial % x_centres.size()]};
      }
      family.cylinders.push_back(q);
    }
  }
  std::ostringstream os;
  os << "dyadic radii from " << r_min << " up to " << r_max << " (" << levels << " levels), s=" << s
     << ", time step R^{2s}, space step R, window [" << t_min << ", " << t_max << "], cap " << per_radius_cap
     << " per radius, " << family.cylinders.size() << " cylinders";
  family.description = os.str();
  return family;
}

SeminormResult pbmo_seminorm(const SpaceTimeField& f, const CylinderFamily& family) {
  if (family.cylinders.empty()) fail(ErrorKind::EmptyFamily, "cylinder family is empty");
  SeminormResult best;
  best.cylinder_count = family.cylinders.size();
  best.worst = family.cylinders.front();
  for (const auto& q : family.cylinders) {
    const double osc = mean_oscillation(f, q);
    if (osc > best.value) {
      best.value = osc;
      best.worst = q;
    }
  }
  return best;
}

double exp_moment(std::span<const SpaceTimeField> fields, std::span<const double> weights,
                  const ParabolicCylinder& q) {
  if (fields.empty() || fields.size() != weights.size())
    fail(ErrorKind::InvalidArgument, "one weight per field is required");
  const auto c = locate(fields.front(), q);
  double sum = 0.0;
  for (std::size_t k : c.frames) {
    for (std::size_t p : c.points) {
      double e = 0.0;
      for (std::size_t j = 0; j < fields.size(); ++j) e += weights[j] * fields[j].frames[k].values[p];
      sum += std::exp(e);
    }
  }
  return sum / static_cast<double>(c.frames.size() * c.points.size());
}

double subexp_moment(const SpaceTimeField& v, double r, double rho, const ParabolicCylinder& q) {
  if (!(rho > 0.0 && rho <= 1.0)) fail(ErrorKind::InvalidArgument, "moment order must lie in (0, 1]");
  const auto c = locate(v, q);
  return average_of(v, c, [r, rho](double x) { return std::exp(r * std::pow(std::max(x, 0.0), rho)); });
}

std::vector<ParabolicCylinder> unit_cylinders(const SpaceTimeField& f, double s, int count) {
  if (count < 1) fail(ErrorKind::EmptyFamily, "at least one cylinder is required");
  if (f.empty()) fail(ErrorKind::CylinderOutOfRange, "field has no frames");
  const double horizon = f.times.back();
  const double L = f.grid.length();
  if (horizon <= 2.0 || L <= 2.0) fail(ErrorKind::CylinderOutOfRange, "record too short for unit cylinders");
  constexpr double kGolden = 0.6180339887498949;
  constexpr double kSilver = 0.4142135623730951;
  std::vector<ParabolicCylinder> out;
  for (int k = 0; k < count; ++k) {
    ParabolicCylinder q;
    q.radius = 1.0;
    q.s = s;
    q.t0 = 1.0 + (horizon - 2.0) * (k + 1) / count;
    const double a = std::fmod((k + 1) * kGolden, 1.0);
    const double b = std::fmod((k + 1) * kSilver, 1.0);
    q.x0 = {-0.5 * L + 1.0 + a * (L - 2.0), f.grid.dim() == 2 ? -0.5 * L + 1.0 + b * (L - 2.0) : 0.0};
    out.push_back(q);
  }
  return out;
}

namespace {

template <class Fn>
MomentReport moment_report(const std::vector<ParabolicCylinder>& cylinders, Fn&& fn) {
  MomentReport r;
  r.cylinders = cylinders;
  r.passed = !cylinders.empty();
  r.min = std::numeric_limits<double>::infinity();
  for (const auto& q : cylinders) {
    const double m = fn(q);
    r.values.push_back(m);
    r.max = std::max(r.max, m);
    r.min = std::min(r.min, m);
    if (!std::isfinite(m)) r.passed = false;
  }
  return r;
}

}  // namespace

MomentReport exp_moment_report(std::span<const SpaceTimeField> fields, std::span<const double> weights,
                               const std::vector<ParabolicCylinder>& cylinders) {
  return moment_report(cylinders, [&](const ParabolicCylinder& q) { return exp_moment(fields, weights, q); });
}

MomentReport subexp_moment_report(const SpaceTimeField& v, double r, double rho,
                                  const std::vector<ParabolicCylinder>& cylinders) {
  return moment_report(cylinders, [&](const ParabolicCylinder& q) { return subexp_moment(v, r, rho, q); });
}

TailCurve jn_tail(const SpaceTimeField& f, const ParabolicCylinder& q, std::span<const double> levels) {
  for (std::size_t k = 0; k < levels.size(); ++k) {
    if (!(levels[k] > 0.0) || (k > 0 && !(levels[k] > levels[k - 1])))
      fail(ErrorKind::InvalidArgument, "levels must be positive and increasing");
  }
  const auto c = locate(f, q);
  const double avg = average_of(f, c, [](double v) { return v; });
  std::vector<double> deviations;
  deviations.reserve(c.frames.size() * c.points.size());
  for (std::size_t k : c.frames)
    for (std::size_t p : c.points) deviations.push_back(std::abs(f.frames[k].values[p] - avg));
  std::sort(deviations.begin(), deviations.end());

  TailCurve curve;
  curve.levels.assign(levels.begin(), levels.end());
  curve.sample_count = deviations.size();
  double total = 0.0;
  for (double d : deviations) total += d;
  curve.mean_oscillation = total / static_cast<double>(deviations.size());
  for (double lambda : levels) {
    const auto first = std::lower_bound(deviations.begin(), deviations.end(), lambda);
    curve.measures.push_back(static_cast<double>(deviations.end() - first) / static_cast<double>(deviations.size()));
  }
  if (curve.mean_oscillation <= 1e-14 * std::max(1.0, std::abs(avg))) {
    curve.degenerate = true;
    curve.slope = -std::numeric_limits<double>::infinity();
    return curve;
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const double m = curve.measures[k];
    if (m >= 1e-4 && m <= 0.5) pts.emplace_back(levels[k], std::log(m));
  }
  curve.fitted_points = static_cast<int>(pts.size());
  if (pts.size() < 2) {
    curve.slope = std::numeric_limits<double>::quiet_NaN();
    return curve;
  }
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pts.size());
  curve.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  curve.intercept = (sy - curve.slope * sx) / n;
  double ss_res = 0.0, ss_tot = 0.0;
  const double ybar = sy / n;
  for (auto [x, y] : pts) {
    const double e = y - (curve.intercept + curve.slope * x);
    ss_res += e * e;
    ss_tot += (y - ybar) * (y - ybar);
  }
  curve.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return curve;
}

std::vector<double> default_jn_levels(double seminorm_estimate) {
  if (!(seminorm_estimate > 0.0)) fail(ErrorKind::DegenerateField, "seminorm estimate must be positive");
  std::vector<double> levels(24);
  for (int k = 0; k < 24; ++k) levels[k] = seminorm_estimate * 0.1 * std::pow(100.0, k / 23.0);
  return levels;
}

std::vector<TimelinePoint> sup_timeline(std::span<const SpaceTimeField> fields) {
  std::vector<TimelinePoint> out;
  if (fields.empty()) return out;
  const auto& first = fields.front();
  for (std::size_t k = 0; k < first.frame_count(); ++k) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& f : fields) m = std::max(m, f.frames[k].max());
    out.push_back({first.times[k], m});
  }
  return out;
}

std::vector<TimelinePoint> sup_timeline(const Trajectory& traj) { return sup_timeline(traj.products); }

double timeline_max(const std::vector<TimelinePoint>& timeline, double t_lo, double t_hi) {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& p : timeline)
    if (p.t >= t_lo && p.t <= t_hi) m = std::max(m, p.sup);
  return m;
}

SpaceTimeField restrict_time(const SpaceTimeField& f, double t_lo, double t_hi) {
  SpaceTimeField out(f.grid);
  const double slack = 1e-9 * std::max(1.0, std::abs(t_hi));
  for (std::size_t k = 0; k < f.frame_count(); ++k)
    if (f.times[k] >= t_lo - slack && f.times[k] <= t_hi + slack) out.append(f.times[k], f.frames[k]);
  return out;
}

}  // namespace rdb
