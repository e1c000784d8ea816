#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rdb/error.hpp"
#include "rdb/operators.hpp"
#include "rdb/spectral.hpp"
#include "support/expect.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace rdb;

namespace {

// a(t) cos(xi x) on frames 0, h, ..., T.
SpaceTimeField mode_forcing(const Grid& grid, double xi, double horizon, double h,
                            const std::function<double(double)>& a) {
  SpaceTimeField f(grid);
  const auto steps = std::lround(horizon / h);
  for (long k = 0; k <= steps; ++k) {
    const double t = k * h;
    f.append(t, Field::sample(grid, [&](std::span<const double> x) { return a(t) * std::cos(xi * x[0]); }));
  }
  return f;
}

// -lambda * integral_0^t exp(-kappa lambda (t - r)) a(r) dr with lambda = |xi|^{2s}.
double mode_oracle(double xi, double kappa, double s, double t, const std::function<double(double)>& a) {
  const double lambda = std::pow(xi * xi, s);
  return -lambda * oracle::adaptive_simpson([&](double r) { return std::exp(-kappa * lambda * (t - r)) * a(r); }, 0.0,
                                            t, 1e-13);
}

double worst_mode_error(const SpaceTimeField& phi, double xi, double kappa, double s,
                        const std::function<double(double)>& a, std::size_t every) {
  double worst = 0.0;
  for (std::size_t k = 0; k < phi.frame_count(); k += every) {
    const double amp = mode_oracle(xi, kappa, s, phi.times[k], a);
    for (std::size_t p = 0; p < phi.grid.size(); ++p) {
      const double x = phi.grid.coordinate(static_cast<int>(p));
      worst = std::max(worst, std::abs(phi.frames[k][p] - amp * std::cos(xi * x)));
    }
  }
  return worst;
}

double max_diff(const SpaceTimeField& a, const SpaceTimeField& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.frame_count(); ++k) d = std::max(d, max_abs_difference(a.frames[k], b.frames[k]));
  return d;
}

}  // namespace

TEST_CASE("single-mode forcing matches the scalar oracle") {
  const Grid grid(1, 2.0 * std::numbers::pi, 32);
  for (double s : {1.0, 0.5, 0.25}) {
    CAPTURE(s);
    for (double xi : {1.0, 3.0}) {
      const double kappa = 0.8;
      auto linear = [](double t) { return 1.0 + 2.0 * t; };
      const auto f1 = mode_forcing(grid, xi, 2.0, 0.01, linear);
      CHECK(worst_mode_error(apply_T(f1, kappa, s).phi, xi, kappa, s, linear, 10) < 1e-12);

      auto smooth = [](double t) { return 0.5 + std::sin(t); };
      const auto f2 = mode_forcing(grid, xi, 2.0, 1e-4, smooth);
      CHECK(worst_mode_error(apply_T(f2, kappa, s).phi, xi, kappa, s, smooth, 1000) < 1e-8);
    }
  }
}

TEST_CASE("direct kernel quadrature agrees with the PDE route") {
  // Classical T F = integral of (g_{kappa tau} * Laplacian F)(t - tau) over tau, with
  // the Gaussian convolution done by quadrature on the line.
  const double kappa = 0.6;
  const double length = 2.0 * std::numbers::pi;
  const Grid grid(1, length, 64);
  auto forcing = [](double t, double x) { return std::cos(x + 0.5 * t) + 0.5 * std::sin(2.0 * x) * t; };
  auto laplacian = [](double t, double x) { return -std::cos(x + 0.5 * t) - 2.0 * std::sin(2.0 * x) * t; };
  SpaceTimeField f(grid);
  for (int k = 0; k <= 1000; ++k) {
    const double t = k * 1e-3;
    f.append(t, Field::sample(grid, [&](std::span<const double> x) { return forcing(t, x[0]); }));
  }
  const SpaceTimeField phi = apply_T(f, kappa, 1.0).phi;
  for (int p : {0, 17, 40}) {
    const double x = grid.coordinate(p);
    const double direct = oracle::adaptive_simpson(
        [&](double tau) {
          if (tau <= 0.0) return laplacian(1.0, x);
          const double sd = std::sqrt(2.0 * kappa * tau);
          return oracle::trapezoid(
              [&](double y) {
                return std::exp(-0.5 * y * y / (sd * sd)) / (sd * std::sqrt(2.0 * std::numbers::pi)) *
                       laplacian(1.0 - tau, x - y);
              },
              -12.0 * sd, 12.0 * sd, 400);
        },
        0.0, 1.0, 1e-10);
    CHECK(phi.frames.back()[static_cast<std::size_t>(p)] == doctest::Approx(direct).epsilon(1e-6));
  }
}

TEST_CASE("T annihilates constants and is linear") {
  const Grid grid(1, 16.0, 64);
  SpaceTimeField c(grid);
  for (int k = 0; k <= 50; ++k) c.append(k * 0.02, Field::constant(grid, 3.0 + 0.1 * k));
  CHECK(apply_T(c, 1.0, 1.0).phi.sup_norm() <= 1e-14);
  CHECK(apply_T(c, 1.0, 0.5).phi.sup_norm() <= 1e-14);

  const auto f1 = smooth_random_forcing(grid, 1.0, 0.02, 1);
  const auto f2 = smooth_random_forcing(grid, 1.0, 0.02, 2);
  for (double s : {1.0, 0.75}) {
    const auto combo = apply_T(linear_combination(2.0, f1, -3.0, f2), 1.3, s).phi;
    const auto sum = linear_combination(2.0, apply_T(f1, 1.3, s).phi, -3.0, apply_T(f2, 1.3, s).phi);
    CHECK(max_diff(combo, sum) < 1e-10);
  }
  const auto phi = apply_T(f1, 1.0, 1.0);
  CHECK(phi.method == OperatorMethod::PdeSolve);
  CHECK(phi.phi.times == f1.times);
  CHECK(phi.phi.frames.front().sup_norm() == 0.0);
}

TEST_CASE("forced heat equation with unit forcing gives J = t") {
  const Grid grid(1, 8.0, 32);
  SpaceTimeField one(grid);
  for (int k = 0; k <= 400; ++k) one.append(k * 0.01, Field::constant(grid, 1.0));
  for (double s : {1.0, 0.5}) {
    const SpaceTimeField j = solve_forced_heat(one, 2.0, s);
    for (std::size_t k = 0; k < j.frame_count(); ++k) {
      CHECK(j.frames[k].max() == doctest::Approx(j.times[k]).epsilon(1e-12));
      CHECK(j.frames[k].min() == doctest::Approx(j.times[k]).epsilon(1e-12));
    }
    const HoelderModulus mod = hoelder_time_modulus(j, 0.5, 1.0);
    CHECK(mod.constant <= 1.0 + 1e-12);
    CHECK(mod.constant == doctest::Approx(1.0).epsilon(1e-9));
  }
  CHECK(expect::error_kind([&] { (void)hoelder_time_modulus(one, 1.0, 1.0); }) == ErrorKind::PreconditionViolation);
  CHECK(expect::error_kind([&] { (void)hoelder_time_modulus(one, 0.0, 1.0); }) == ErrorKind::PreconditionViolation);
  SpaceTimeField single(grid);
  single.append(0.0, Field(grid));
  CHECK(expect::error_kind([&] { (void)hoelder_time_modulus(single, 0.5, 1.0); }) == ErrorKind::EmptySample);
}

TEST_CASE("J route") {
  const Grid grid(1, 2.0 * std::numbers::pi, 32);
  SpaceTimeField zero(grid);
  for (int k = 0; k <= 20; ++k) zero.append(k * 0.05, Field(grid));
  const auto z = apply_T_via_J(zero, 1.0, 1.0);
  CHECK(z.phi.sup_norm() == 0.0);
  CHECK(z.method == OperatorMethod::JDerivative);
  REQUIRE(z.j.has_value());

  // Constant-in-time single mode.
  auto one = [](double) { return 1.0; };
  for (double s : {1.0, 0.5}) {
    const auto f = mode_forcing(grid, 2.0, 1.0, 1e-3, one);
    CHECK(worst_mode_error(apply_T_via_J(f, 0.7, s).phi, 2.0, 0.7, s, one, 50) < 1e-5);
  }

  // Cross-method agreement is second order.
  const Grid g2(1, 32.0, 128);
  double previous = 0.0;
  for (double h : {0.02, 0.01, 0.005}) {
    const auto f = smooth_random_forcing(g2, 2.0, h, 9);
    const double d = max_diff(apply_T(f, 1.0, 1.0).phi, apply_T_via_J(f, 1.0, 1.0).phi);
    if (previous > 0.0) CHECK(std::log2(previous / d) >= 1.9);
    previous = d;
  }
  CHECK(previous < 1e-4);

  SpaceTimeField two(grid);
  two.append(0.0, Field(grid));
  two.append(0.1, Field(grid));
  CHECK(expect::error_kind([&] { (void)apply_T_via_J(two, 1.0, 1.0); }) == ErrorKind::TooFewFrames);
}

TEST_CASE("time derivative is exact for quadratics") {
  const Grid grid(1, 4.0, 8);
  SpaceTimeField q(grid);
  for (int k = 0; k <= 10; ++k) {
    const double t = 0.1 * k;
    q.append(t, Field::constant(grid, 3.0 * t * t - t + 2.0));
  }
  const auto d = time_derivative(q);
  for (std::size_t k = 0; k < d.frame_count(); ++k) CHECK(d.frames[k][3] == doctest::Approx(6.0 * d.times[k] - 1.0));
}

TEST_CASE("lattice preconditions") {
  const Grid grid(1, 8.0, 16);
  SpaceTimeField uneven(grid);
  uneven.append(0.0, Field(grid));
  uneven.append(0.1, Field(grid));
  uneven.append(0.25, Field(grid));
  CHECK(expect::error_kind([&] { (void)apply_T(uneven, 1.0, 1.0); }) == ErrorKind::NonuniformTimeLattice);
  SpaceTimeField late(grid);
  late.append(1.0, Field(grid));
  late.append(1.1, Field(grid));
  CHECK(expect::error_kind([&] { (void)apply_T(late, 1.0, 1.0); }) == ErrorKind::PreconditionViolation);
  SpaceTimeField ok(grid);
  ok.append(0.0, Field(grid));
  ok.append(0.1, Field(grid));
  CHECK(expect::error_kind([&] { (void)apply_T(ok, 0.0, 1.0); }) == ErrorKind::NonpositiveDiffusivity);
  CHECK(expect::error_kind([&] { (void)apply_T(ok, 1.0, 1.5); }) == ErrorKind::InvalidOrder);
}

TEST_CASE("L2 bound holds for random forcings and saturates for stiff modes") {
  const Grid grid(1, 16.0, 64);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    for (double s : {1.0, 0.5}) {
      const auto f = smooth_random_forcing(grid, 2.0, 0.01, seed);
      const double kappa = 0.5 + 0.1 * static_cast<double>(seed);
      const L2BoundReport r = check_L2_bound(f, kappa, s);
      CHECK(r.passed());
      CHECK(r.ratio > 0.0);
    }
    // Rough forcing: independent noise per frame.
    SpaceTimeField noise(grid);
    for (int k = 0; k <= 50; ++k) noise.append(0.02 * k, gen::noise_field(grid, 100 * seed + k));
    CHECK(check_L2_bound(noise, 1.0, 1.0).passed());
    CHECK(check_L2_bound(noise, 1.0, 0.25).passed());
  }
  SpaceTimeField zero(grid);
  for (int k = 0; k <= 5; ++k) zero.append(0.1 * k, Field(grid));
  const L2BoundReport z = check_L2_bound(zero, 1.0, 1.0);
  CHECK(z.ratio == 0.0);
  CHECK(z.passed());

  const Grid circle(1, 2.0 * std::numbers::pi, 256);
  auto one = [](double) { return 1.0; };
  double previous = 0.0;
  for (double xi : {1.0, 4.0, 16.0, 64.0}) {
    const double ratio = check_L2_bound(mode_forcing(circle, xi, 4.0, 0.01, one), 1.0, 1.0).ratio;
    CHECK(ratio < 1.0);
    CHECK(ratio > previous);
    previous = ratio;
  }
  CHECK(previous > 0.99);
}

TEST_CASE("cylinder averages of T F") {
  const Grid grid(1, 16.0, 64);
  SpaceTimeField c(grid);
  for (int k = 0; k <= 300; ++k) c.append(0.02 * k, Field::constant(grid, 2.0));
  const ParabolicCylinder q{3.0, {0.0, 0.0}, 1.0, 1.0};
  const auto flat = cylinder_average_bound(c, 1.0, 1.0, {q}, 1.0);
  CHECK(flat.max_ratio <= 1e-14);
  const auto f = smooth_random_forcing(grid, 6.0, 0.02, 4);
  const auto r = cylinder_average_bound(f, 1.0, 1.0, unit_cylinders(f, 1.0, 10), 10.0);
  CHECK(r.ratios.size() == 10);
  CHECK(std::isfinite(r.max_ratio));
  CHECK(r.passed());
  const ParabolicCylinder beyond{5.5, {0.0, 0.0}, 1.0, 1.0};
  CHECK(expect::error_kind([&] { (void)cylinder_average_bound(f, 1.0, 1.0, {beyond}, 10.0); }) ==
        ErrorKind::CylinderOutOfRange);
}

TEST_CASE("random forcing is bounded and reproducible") {
  const Grid g1(1, 16.0, 64);
  const Grid g2(2, 16.0, 32);
  for (const Grid& g : {g1, g2}) {
    const auto a = smooth_random_forcing(g, 1.0, 0.1, 5);
    const auto b = smooth_random_forcing(g, 1.0, 0.1, 5);
    CHECK(a.frame_count() == 11);
    CHECK(a.sup_norm() <= 1.0);
    CHECK(a.sup_norm() > 0.1);
    CHECK(max_diff(a, b) == 0.0);
    CHECK(max_diff(a, smooth_random_forcing(g, 1.0, 0.1, 6)) > 0.0);
  }
}

TEST_CASE("Hoelder modulus is stable under refinement") {
  const Grid grid(1, 16.0, 64);
  double previous = 0.0;
  for (double h : {0.01, 0.005}) {
    const auto f = smooth_random_forcing(grid, 4.0, h, 3);
    const auto j = solve_forced_heat(f, 1.0, 1.0);
    const HoelderModulus m = hoelder_time_modulus(j, 0.9, f.sup_norm());
    CHECK(std::isfinite(m.constant));
    CHECK(m.pairs > 0);
    if (previous > 0.0) CHECK(std::abs(m.constant / previous - 1.0) < 0.1);
    previous = m.constant;
  }
}
