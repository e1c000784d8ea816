#include "rdb/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rdb/error.hpp"

namespace rdb {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid::Grid(int dim, double length, int points) : dim_(dim), length_(length), points_(points) {
  if (dim != 1 && dim != 2) fail(ErrorKind::InvalidDimension, "grid dimension must be 1 or 2");
  if (points < 8 || !is_power_of_two(points))
    fail(ErrorKind::InvalidResolution, "points per dimension must be a power of two >= 8");
  if (!(length > 0.0) || !std::isfinite(length))
    fail(ErrorKind::InvalidResolution, "torus length must be positive and finite");

  const int half = points / 2 + 1;
  const std::size_t count = spectral_size();
  auto k2 = std::make_shared<std::vector<double>>(count);
  auto kf = std::make_shared<std::vector<double>>(count);
  auto kl = std::make_shared<std::vector<double>>(count);
  if (dim == 1) {
    for (int j = 0; j < half; ++j) {
      const double k = wavenumber(j);
      (*k2)[j] = k * k;
      (*kf)[j] = k;
      (*kl)[j] = k;
    }
  } else {
    for (int i = 0; i < points; ++i) {
      const double ki = wavenumber(i);
      for (int j = 0; j < half; ++j) {
        const double kj = wavenumber(j);
        const std::size_t idx = static_cast<std::size_t>(i) * half + j;
        (*k2)[idx] = ki * ki + kj * kj;
        (*kf)[idx] = ki;
        (*kl)[idx] = kj;
      }
    }
  }
  k2_ = std::move(k2);
  kfirst_ = std::move(kf);
  klast_ = std::move(kl);
}

Grid make_grid(int dim, double length, int points) { return Grid(dim, length, points); }

double Grid::cell_volume() const noexcept { return dim_ == 1 ? dx() : dx() * dx(); }

std::size_t Grid::size() const noexcept {
  const auto n = static_cast<std::size_t>(points_);
  return dim_ == 1 ? n : n * n;
}

std::size_t Grid::spectral_size() const noexcept {
  const auto half = static_cast<std::size_t>(points_ / 2 + 1);
  return dim_ == 1 ? half : static_cast<std::size_t>(points_) * half;
}

double Grid::wavenumber(int index) const noexcept {
  const int signed_index = index < points_ / 2 ? index : index - points_;
  return 2.0 * std::numbers::pi / length_ * signed_index;
}

std::array<double, 2> Grid::point(std::size_t p) const noexcept {
  if (dim_ == 1) return {coordinate(static_cast<int>(p)), 0.0};
  const auto n = static_cast<std::size_t>(points_);
  return {coordinate(static_cast<int>(p / n)), coordinate(static_cast<int>(p % n))};
}

Field::Field(Grid g) : grid(std::move(g)), values(grid.size(), 0.0) {}

Field::Field(Grid g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid.size()) fail(ErrorKind::InvalidArgument, "field size does not match grid");
}

Field Field::constant(const Grid& g, double value) {
  Field f(g);
  std::fill(f.values.begin(), f.values.end(), value);
  return f;
}

Field Field::sample(const Grid& g, const std::function<double(std::span<const double>)>& fn) {
  Field f(g);
  for (std::size_t p = 0; p < f.size(); ++p) {
    const auto x = g.point(p);
    f.values[p] = fn(std::span<const double>(x.data(), static_cast<std::size_t>(g.dim())));
  }
  return f;
}

double Field::mean() const {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double Field::max() const { return *std::max_element(values.begin(), values.end()); }
double Field::min() const { return *std::min_element(values.begin(), values.end()); }

double Field::sup_norm() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double Field::integral() const {
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum * grid.cell_volume();
}

bool Field::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

Field& Field::operator+=(const Field& other) {
  if (!(grid == other.grid)) fail(ErrorKind::InvalidArgument, "grid mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] += other.values[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  if (!(grid == other.grid)) fail(ErrorKind::InvalidArgument, "grid mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) values[i] -= other.values[i];
  return *this;
}

Field& Field::operator*=(double a) {
  for (double& v : values) v *= a;
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double a, Field f) { return f *= a; }

double max_abs_difference(const Field& a, const Field& b) {
  if (!(a.grid == b.grid)) fail(ErrorKind::InvalidArgument, "grid mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

void SpaceTimeField::append(double t, Field f) {
  if (!(f.grid == grid)) fail(ErrorKind::InvalidArgument, "frame grid mismatch");
  if (!times.empty() && !(t > times.back()))
    fail(ErrorKind::NonuniformTimeLattice, "frame times must be strictly increasing");
  if (times.empty() && t < 0.0) fail(ErrorKind::NegativeTime, "first frame time must be >= 0");
  times.push_back(t);
  frames.push_back(std::move(f));
}

double SpaceTimeField::spacing() const {
  if (times.size() < 2) fail(ErrorKind::TooFewFrames, "spacing needs at least two frames");
  return (times.back() - times.front()) / static_cast<double>(times.size() - 1);
}

void SpaceTimeField::require_uniform() const {
  if (times.size() < 2) return;
  const double h = spacing();
  for (std::size_t k = 1; k < times.size(); ++k) {
    if (std::abs((times[k] - times[k - 1]) - h) > 1e-9 * h)
      fail(ErrorKind::NonuniformTimeLattice, "frame spacing is not uniform");
  }
}

double SpaceTimeField::sup_norm() const {
  double m = 0.0;
  for (const auto& f : frames) m = std::max(m, f.sup_norm());
  return m;
}

double SpaceTimeField::max() const {
  double m = -INFINITY;
  for (const auto& f : frames) m = std::max(m, f.max());
  return m;
}

double SpaceTimeField::min() const {
  double m = INFINITY;
  for (const auto& f : frames) m = std::min(m, f.min());
  return m;
}

bool same_lattice(const SpaceTimeField& a, const SpaceTimeField& b) {
  return a.grid == b.grid && a.times == b.times;
}

SpaceTimeField linear_combination(double a, const SpaceTimeField& x, double b, const SpaceTimeField& y) {
  if (!same_lattice(x, y)) fail(ErrorKind::InvalidArgument, "space-time lattices differ");
  SpaceTimeField out(x.grid);
  out.times = x.times;
  out.frames.reserve(x.frame_count());
  for (std::size_t k = 0; k < x.frame_count(); ++k) {
    Field f(x.grid);
    for (std::size_t p = 0; p < f.size(); ++p) f.values[p] = a * x.frames[k].values[p] + b * y.frames[k].values[p];
    out.frames.push_back(std::move(f));
  }
  return out;
}

}  // namespace rdb
