#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace rdb {

/// Periodic torus [-L/2, L/2)^n sampled with N points per dimension.
///
/// Point index j along an axis sits at x_j = -L/2 + j*dx, so the origin is at
/// j = N/2. Two-dimensional fields are stored row-major with the first axis
/// slowest. Copies share the cached spectral metadata.
class Grid {
 public:
  Grid(int dim, double length, int points);

  int dim() const noexcept { return dim_; }
  double length() const noexcept { return length_; }
  int points() const noexcept { return points_; }
  double dx() const noexcept { return length_ / points_; }
  double cell_volume() const noexcept;
  std::size_t size() const noexcept;
  /// Number of complex coefficients in the real-to-complex half spectrum.
  std::size_t spectral_size() const noexcept;

  double coordinate(int index) const noexcept { return -0.5 * length_ + index * dx(); }
  /// Angular wavenumber of DFT index i on the symmetric lattice.
  double wavenumber(int index) const noexcept;
  /// Position of flat point index p.
  std::array<double, 2> point(std::size_t p) const noexcept;

  /// |xi|^2 for each half-spectrum coefficient, in FFTW r2c layout.
  std::span<const double> wavenumber_squared() const noexcept { return *k2_; }
  /// Signed wavenumber along `axis` for each half-spectrum coefficient.
  std::span<const double> wavevector_component(int axis) const noexcept {
    return axis == 0 ? *kfirst_ : *klast_;
  }

  friend bool operator==(const Grid& a, const Grid& b) noexcept {
    return a.dim_ == b.dim_ && a.points_ == b.points_ && a.length_ == b.length_;
  }

 private:
  int dim_;
  double length_;
  int points_;
  std::shared_ptr<const std::vector<double>> k2_;
  std::shared_ptr<const std::vector<double>> kfirst_;
  std::shared_ptr<const std::vector<double>> klast_;
};

Grid make_grid(int dim, double length, int points);

/// Scalar samples on a grid.
struct Field {
  Grid grid;
  std::vector<double> values;

  explicit Field(Grid g);
  Field(Grid g, std::vector<double> v);

  static Field constant(const Grid& g, double value);
  static Field sample(const Grid& g, const std::function<double(std::span<const double>)>& fn);

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }

  double mean() const;
  double max() const;
  double min() const;
  double sup_norm() const;
  /// Riemann sum of the samples times dx^n.
  double integral() const;
  bool all_finite() const;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double a);
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double a, Field f);

/// Max absolute difference between two fields on the same grid.
double max_abs_difference(const Field& a, const Field& b);

/// Time-indexed sequence of fields on a common grid.
struct SpaceTimeField {
  Grid grid;
  std::vector<double> times;
  std::vector<Field> frames;

  explicit SpaceTimeField(Grid g) : grid(std::move(g)) {}

  std::size_t frame_count() const noexcept { return frames.size(); }
  bool empty() const noexcept { return frames.empty(); }
  void append(double t, Field f);
  /// Frame spacing; requires at least two frames.
  double spacing() const;
  /// Throws nonuniform-time-lattice unless spacing is uniform to a relative 1e-9.
  void require_uniform() const;
  double sup_norm() const;
  double max() const;
  double min() const;
};

/// Same lattice and grid; used by linear operations on space-time fields.
bool same_lattice(const SpaceTimeField& a, const SpaceTimeField& b);

SpaceTimeField linear_combination(double a, const SpaceTimeField& x, double b, const SpaceTimeField& y);

}  // namespace rdb
