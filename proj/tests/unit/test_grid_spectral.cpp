#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rdb/error.hpp"
#include "rdb/grid.hpp"
#include "rdb/spectral.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace rdb;

namespace {

double rel_linf(const Field& got, const Field& want) {
  return max_abs_difference(got, want) / std::max(want.sup_norm(), 1e-300);
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("make_grid geometry") {
  const Grid g = make_grid(1, 2 * std::numbers::pi, 64);
  CHECK(g.dx() == doctest::Approx(2 * std::numbers::pi / 64).epsilon(1e-15));
  CHECK(g.size() == 64);
  CHECK(g.coordinate(32) == doctest::Approx(0.0).epsilon(1e-15));

  const Grid g2 = make_grid(2, 10.0, 8);
  CHECK(g2.size() == 64);
  CHECK(g2.spectral_size() == 8 * 5);
}

TEST_CASE("make_grid rejects bad shapes") {
  CHECK(kind_of([] { make_grid(3, 1.0, 64); }) == ErrorKind::InvalidDimension);
  CHECK(kind_of([] { make_grid(0, 1.0, 64); }) == ErrorKind::InvalidDimension);
  CHECK(kind_of([] { make_grid(1, 1.0, 4); }) == ErrorKind::InvalidResolution);
  CHECK(kind_of([] { make_grid(1, 1.0, 48); }) == ErrorKind::InvalidResolution);
  CHECK(kind_of([] { make_grid(1, -1.0, 64); }) == ErrorKind::InvalidResolution);
}

TEST_CASE("wavenumbers form the symmetric lattice") {
  const Grid g = make_grid(1, 5.0, 16);
  const double base = 2 * std::numbers::pi / 5.0;
  for (int i = 0; i < 16; ++i) {
    const int m = i < 8 ? i : i - 16;
    CHECK(g.wavenumber(i) == doctest::Approx(base * m).epsilon(1e-14));
  }
  const Grid g2 = make_grid(2, 5.0, 8);
  const auto k2 = g2.wavenumber_squared();
  // row 7 is the -1 mode, column 2 is the +2 mode
  CHECK(k2[7 * 5 + 2] == doctest::Approx(base * base * (1 + 4)).epsilon(1e-14));
}

TEST_CASE("semigroup leaves constants unchanged") {
  for (int dim : {1, 2}) {
    const Grid g = make_grid(dim, 7.0, 16);
    const Field c = Field::constant(g, 2.5);
    const Field out = apply_semigroup(c, 3.0, 0.7, 0.4);
    CHECK(max_abs_difference(out, c) < 1e-13);
  }
}

TEST_CASE("semigroup decays single modes by the exact factor") {
  const Grid g = make_grid(1, 2 * std::numbers::pi, 64);
  for (double s : {0.25, 0.5, 1.0}) {
    const int m = 3;
    const double t = 0.2, kappa = 1.3;
    const Field f = Field::sample(g, [&](auto x) { return std::cos(m * x[0]); });
    const double factor = std::exp(-t * kappa * std::pow(m, 2.0 * s));
    const Field want = Field::sample(g, [&](auto x) { return factor * std::cos(m * x[0]); });
    CHECK(rel_linf(apply_semigroup(f, t, kappa, s), want) < 1e-12);
  }
  const Grid g2 = make_grid(2, 2 * std::numbers::pi, 32);
  const Field f2 = Field::sample(g2, [](auto x) { return std::cos(2 * x[0] - 3 * x[1]); });
  const double factor = std::exp(-0.1 * std::pow(13.0, 0.75));
  const Field want2 = Field::sample(g2, [&](auto x) { return factor * std::cos(2 * x[0] - 3 * x[1]); });
  CHECK(rel_linf(apply_semigroup(f2, 0.1, 1.0, 0.75), want2) < 1e-12);
}

TEST_CASE("heat semigroup evolves a narrow Gaussian into a wider one") {
  // g_{kappa t0} evolved by t equals g_{kappa (t0 + t)}; the reference is the periodized closed form.
  const double L = 20.0, kappa = 0.8, t0 = 0.05, t = 0.3;
  const Grid g = make_grid(1, L, 512);
  const Field bump = Field::sample(g, [&](auto x) { return oracle::periodic_gaussian(x[0], kappa * t0, L); });
  const Field want = Field::sample(g, [&](auto x) { return oracle::periodic_gaussian(x[0], kappa * (t0 + t), L); });
  CHECK(rel_linf(apply_semigroup(bump, t, kappa, 1.0), want) < 1e-6);
}

TEST_CASE("semigroup argument checks") {
  const Grid g = make_grid(1, 1.0, 8);
  const Field f(g);
  CHECK(kind_of([&] { apply_semigroup(f, -1.0, 1.0, 1.0); }) == ErrorKind::NegativeTime);
  CHECK(kind_of([&] { apply_semigroup(f, 1.0, 0.0, 1.0); }) == ErrorKind::NonpositiveDiffusivity);
  CHECK(kind_of([&] { apply_semigroup(f, 1.0, 1.0, 1.5); }) == ErrorKind::InvalidOrder);
  CHECK(kind_of([&] { apply_semigroup(f, 1.0, 1.0, 0.0); }) == ErrorKind::InvalidOrder);
}

TEST_CASE("fractional laplacian on simple modes") {
  const Grid g = make_grid(1, 2 * std::numbers::pi, 32);
  CHECK(fractional_laplacian(Field::constant(g, 4.0), 0.3).sup_norm() < 1e-13);

  const Field c1 = Field::sample(g, [](auto x) { return std::cos(x[0]); });
  CHECK(max_abs_difference(fractional_laplacian(c1, 0.5), -1.0 * c1) < 1e-13);

  const Field c2 = Field::sample(g, [](auto x) { return std::cos(2 * x[0]); });
  CHECK(max_abs_difference(fractional_laplacian(c2, 1.0), -4.0 * c2) < 1e-12);

  CHECK(kind_of([&] { fractional_laplacian(c1, 1.2); }) == ErrorKind::InvalidOrder);
}

TEST_CASE("property: transform round trip") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Grid g = make_grid(seed % 2 ? 1 : 2, 3.0 + seed, 32);
    const Field f = gen::noise_field(g, seed);
    CHECK(rel_linf(inverse(forward(f), g), f) < 1e-12);
  }
}

TEST_CASE("property: semigroup composition and mean preservation") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const Grid g = make_grid(seed % 2 ? 1 : 2, 8.0, 32);
    const Field f = gen::noise_field(g, 100 + seed);
    const double s = 0.05 + 0.95 * u(rng), kappa = 0.2 + 2 * u(rng);
    const double t1 = u(rng), t2 = u(rng);
    const Field twice = apply_semigroup(apply_semigroup(f, t1, kappa, s), t2, kappa, s);
    const Field once = apply_semigroup(f, t1 + t2, kappa, s);
    CHECK(rel_linf(twice, once) < 1e-10);
    CHECK(std::abs(once.mean() - f.mean()) <= 1e-12 * std::max(1.0, std::abs(f.mean())) + 1e-15);
  }
}

TEST_CASE("property: heat semigroup obeys the maximum principle on smooth data") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Grid g = make_grid(seed % 2 ? 1 : 2, 10.0, 64);
    const Field f = gen::smooth_field(g, seed);
    const Field out = apply_semigroup(f, 0.01 * seed, 1.0, 1.0);
    CHECK(out.max() <= f.max() + 1e-8);
    CHECK(out.min() >= f.min() - 1e-8);
  }
}

TEST_CASE("property: L2 norm of mean-zero data decays monotonically") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Grid g = make_grid(seed % 2 ? 1 : 2, 6.0, 32);
    Field f = gen::noise_field(g, seed);
    const double m = f.mean();
    for (double& v : f.values) v -= m;
    double previous = INFINITY;
    for (double t : {0.0, 0.01, 0.05, 0.2, 1.0}) {
      const Field out = apply_semigroup(f, t, 1.0, 0.6);
      double sq = 0.0;
      for (double v : out.values) sq += v * v;
      CHECK(sq <= previous * (1 + 1e-14));
      previous = sq;
    }
  }
}

TEST_CASE("plan reuse gives bit-identical results") {
  const Grid g = make_grid(2, 4.0, 16);
  const Field f = gen::noise_field(g, 7);
  const Field a = apply_semigroup(f, 0.3, 1.0, 0.5);
  const Field b = apply_semigroup(f, 0.3, 1.0, 0.5);
  CHECK(a.values == b.values);
}
