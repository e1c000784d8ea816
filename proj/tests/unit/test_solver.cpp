#include <doctest.h>

#include <cmath>
#include <numbers>

#include "rdb/analysis.hpp"
#include "rdb/error.hpp"
#include "rdb/solver.hpp"
#include "rdb/spectral.hpp"
#include "support/expect.hpp"

using namespace rdb;

namespace {

SystemSpec expression_model(const std::string& p, const std::string& f, double eta = 1.0, double kappa = 1.0,
                            double s = 1.0) {
  SystemSpec spec;
  NonlinearitySpec& nl = spec.nonlinearity;
  nl.name = "expression";
  nl.consumption = {Expression::parse(p, 1, 1).as_rate()};
  nl.production = {Expression::parse(f, 1, 1).as_rate()};
  nl.consumption_text = {p};
  nl.production_text = {f};
  nl.stoichiometry = {{1.0}};
  nl.growth_rates = {{1.0}};
  spec.fuel_diffusivity = {eta};
  spec.product_diffusivity = {kappa};
  spec.order = s;
  spec.fuel_bound = 1.0;
  spec.product_bound = 1.0;
  return spec;
}

double max_diff(const SpaceTimeField& a, const SpaceTimeField& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.frame_count(); ++k) d = std::max(d, max_abs_difference(a.frames[k], b.frames[k]));
  return d;
}

Trajectory combustion_run(const Grid& grid, double dt, double horizon, int stride, double eta = 1.0,
                          double kappa = 2.0) {
  const SystemSpec spec = builtin_model("combustion-exp", {.fuel_diffusivity = eta, .product_diffusivity = kappa});
  const InitialData init = make_initial_data(spec, grid, {.profile = InitialProfile::Bump, .width = 1.5});
  return simulate(spec, init, {.horizon = horizon, .dt = dt, .stride = stride});
}

}  // namespace

TEST_CASE("initial data profiles") {
  const Grid grid(1, 20.0, 128);
  SystemSpec spec = builtin_model("multi-species", {.fuels = 2, .products = 1, .fuel_bound = 0.8, .product_bound = 2.0});
  const InitialData bump = make_initial_data(spec, grid, {});
  REQUIRE(bump.fuels.size() == 2);
  CHECK(bump.fuels[0].max() == doctest::Approx(0.8));
  CHECK(bump.fuels[0][64] == doctest::Approx(0.8));
  CHECK(bump.products[0].max() == doctest::Approx(2.0));
  const InitialData random = make_initial_data(spec, grid, {.profile = InitialProfile::Random, .seed = 4});
  CHECK(random.fuels[1].min() >= 0.0);
  CHECK(random.fuels[1].max() <= 0.8);
  const InitialData flat = make_initial_data(spec, grid, {.profile = InitialProfile::Constant});
  CHECK(flat.products[0].min() == 2.0);
}

TEST_CASE("zero reaction gives pure semigroup evolution") {
  const Grid grid(1, 20.0, 128);
  for (double s : {1.0, 0.5}) {
    const SystemSpec spec = expression_model("0", "0", 0.7, 1.9, s);
    const InitialData init = make_initial_data(spec, grid, {.profile = InitialProfile::Random, .seed = 2});
    const Trajectory traj = simulate(spec, init, {.horizon = 1.0, .dt = 0.01, .stride = 10});
    REQUIRE(traj.frame_count() == 11);
    for (std::size_t k = 0; k < traj.frame_count(); ++k) {
      const double t = traj.fuels[0].times[k];
      CHECK(max_abs_difference(traj.fuels[0].frames[k], apply_semigroup(init.fuels[0], t, 0.7, s)) < 1e-12);
      CHECK(max_abs_difference(traj.products[0].frames[k], apply_semigroup(init.products[0], t, 1.9, s)) < 1e-12);
    }
    const auto line = sup_timeline(traj);
    for (std::size_t k = 1; k < line.size(); ++k) CHECK(line[k].sup <= line[k - 1].sup + 1e-14);
    for (const auto& p : line) CHECK(p.sup >= 0.0);
  }
}

TEST_CASE("combustion run respects the maximum principle and burns fuel") {
  const Grid grid(1, 20.0, 256);
  const Trajectory traj = combustion_run(grid, 2e-3, 4.0, 10);
  CHECK(traj.status == RunStatus::Completed);
  CHECK(traj.frame_count() == 201);
  CHECK(traj.stats.steps == 2000);
  CHECK(traj.stats.fuel_max <= 1.0 + 1e-8);
  CHECK(traj.stats.product_min >= -1e-8);
  double previous = HUGE_VAL;
  for (std::size_t k = 0; k < traj.frame_count(); ++k) {
    CHECK(traj.fuels[0].frames[k].max() <= 1.0 + 1e-8);
    CHECK(traj.fuels[0].frames[k].min() >= 0.0);
    CHECK(traj.products[0].frames[k].min() >= -1e-8);
    CHECK(traj.consumption[0].frames[k].min() >= -1e-8);
    const double mass = traj.fuels[0].frames[k].integral();
    CHECK(mass <= previous + 1e-12);
    previous = mass;
  }
  CHECK(traj.fuels[0].frames.back().integral() < traj.fuels[0].frames.front().integral());
  // Recorded reaction terms are the rates evaluated on the stored frames.
  const std::size_t k = 100;
  const std::size_t p = 128;
  const double u = traj.fuels[0].frames[k][p];
  const double v = traj.products[0].frames[k][p];
  CHECK(traj.consumption[0].frames[k][p] == doctest::Approx(u * std::exp(v)));
  CHECK(traj.production[0].frames[k][p] == doctest::Approx(u * std::exp(v)));
}

TEST_CASE("Strang splitting converges at second order") {
  const Grid grid(1, 20.0, 128);
  std::vector<Trajectory> runs;
  for (double dt : {0.02, 0.01, 0.005}) runs.push_back(combustion_run(grid, dt, 1.0, static_cast<int>(std::lround(0.1 / dt))));
  const double e1 = max_diff(runs[0].products[0], runs[1].products[0]);
  const double e2 = max_diff(runs[1].products[0], runs[2].products[0]);
  CHECK(std::log2(e1 / e2) >= 1.8);
}

TEST_CASE("failure detection") {
  const Grid grid(1, 10.0, 64);
  SystemSpec runaway = expression_model("0", "exp(v)");
  runaway.product_bound = 0.0;
  const InitialData init = make_initial_data(runaway, grid, {.profile = InitialProfile::Constant});
  CHECK(expect::error_kind([&] { (void)simulate(runaway, init, {.horizon = 2.0, .dt = 1e-3}); }) ==
        ErrorKind::BlowUpDetected);
  const Trajectory stopped =
      simulate(runaway, init, {.horizon = 2.0, .dt = 1e-3, .stride = 10, .on_failure = BlowUpPolicy::Stop});
  CHECK(stopped.status == RunStatus::BlowUp);
  // The exact solution -log(1 - t) blows up at t = 1.
  CHECK(stopped.horizon <= 1.01);
  CHECK(stopped.horizon >= 0.99);
  CHECK(!stopped.message.empty());

  SystemSpec negative = expression_model("0", "0 - 10");
  negative.product_bound = 0.0;
  const InitialData zero = make_initial_data(negative, grid, {.profile = InitialProfile::Constant});
  CHECK(expect::error_kind([&] { (void)simulate(negative, zero, {.horizon = 0.1, .dt = 1e-3}); }) ==
        ErrorKind::Instability);
  SystemSpec nan = expression_model("0", "0 / 0");
  CHECK(expect::error_kind([&] { (void)simulate(nan, zero, {.horizon = 0.1, .dt = 1e-3}); }) == ErrorKind::Instability);
}

TEST_CASE("simulate preconditions") {
  const Grid grid(1, 10.0, 64);
  const SystemSpec spec = builtin_model("combustion-exp");
  InitialData init = make_initial_data(spec, grid, {});
  CHECK(expect::error_kind([&] { (void)simulate(spec, init, {.horizon = 1.0, .dt = 0.3}); }) ==
        ErrorKind::InvalidArgument);
  CHECK(expect::error_kind([&] { (void)simulate(spec, init, {.horizon = 1.0, .dt = 0.1, .stride = 3}); }) ==
        ErrorKind::InvalidArgument);
  init.fuels[0][3] = 1.5;
  CHECK(expect::error_kind([&] { (void)simulate(spec, init, {.horizon = 1.0, .dt = 0.1}); }) ==
        ErrorKind::PreconditionViolation);
}

TEST_CASE("Duhamel reconstruction is second order") {
  const Grid grid(1, 20.0, 128);
  std::vector<double> residual;
  for (double dt : {0.01, 0.005}) {
    const Trajectory traj = combustion_run(grid, dt, 2.0, 1);
    const AuxiliarySet aux = duhamel_split(traj);
    residual.push_back(reconstruction_residual(traj, aux).max());
  }
  CHECK(residual[1] < 1e-3);
  CHECK(std::log2(residual[0] / residual[1]) >= 1.8);
}

TEST_CASE("auxiliary identities") {
  const Grid grid(1, 20.0, 128);
  SUBCASE("equal diffusivities make H_ij and F_i coincide") {
    const Trajectory traj = combustion_run(grid, 0.01, 1.0, 2, 1.0, 1.0);
    const AuxiliarySet aux = duhamel_split(traj);
    CHECK(max_diff(aux.at(0, 0), aux.fuel[0]) == 0.0);
    CHECK(decomposition_residual(aux, 0, 0) < 1e-10);
  }
  SUBCASE("decomposition residual converges at second order") {
    std::vector<double> r;
    for (double dt : {0.004, 0.002}) {
      const Trajectory traj = combustion_run(grid, dt, 1.0, 1);
      r.push_back(decomposition_residual(duhamel_split(traj), 0, 0));
    }
    CHECK(r[1] < 1e-4);
    CHECK(std::log2(r[0] / r[1]) >= 1.9);
  }
  SUBCASE("stoichiometric bound on H") {
    const std::vector<std::vector<double>> a{{1.0, 0.5}, {0.25, 2.0}};
    const SystemSpec spec = builtin_model("multi-species", {.fuels = 2, .products = 2, .stoichiometry = a});
    SystemSpec varied = spec;
    varied.fuel_diffusivity = {1.0, 0.5};
    varied.product_diffusivity = {2.0, 1.0};
    const InitialData init = make_initial_data(varied, grid, {.profile = InitialProfile::Random, .seed = 8});
    const Trajectory traj = simulate(varied, init, {.horizon = 1.0, .dt = 0.01, .stride = 2});
    const AuxiliarySet aux = duhamel_split(traj);
    for (int j = 0; j < 2; ++j) CHECK(stoichiometric_excess(traj, aux, j) <= 1e-10);
    CHECK(expect::error_kind([&] { (void)aux.at(2, 0); }) == ErrorKind::IndexOutOfRange);
    CHECK(expect::error_kind([&] { (void)decomposition_residual(aux, 0, 5); }) == ErrorKind::IndexOutOfRange);
  }
}

TEST_CASE("good/bad constants") {
  for (int m = 1; m <= 8; ++m) {
    CHECK(goodbad_alpha(1.0, 1.0, m, 1) == 1.0);
    CHECK(goodbad_alpha(1.0, 1.0, m, 2) == 1.0);
  }
  CHECK(goodbad_beta(1.0, 2, 1) == doctest::Approx(0.8577638849607068).epsilon(1e-14));
  CHECK(goodbad_alpha(2.0, 1.0, 3, 1) == doctest::Approx(std::sqrt(0.5) * std::exp(4.5)).epsilon(1e-14));
  CHECK(goodbad_beta(2.0, 4, 2) == doctest::Approx(2.0 * std::exp(-1.0)).epsilon(1e-14));
}

namespace {

// Largest total mismatch over m in {1, 2, 4}, checking the cone bounds on the way.
double good_bad_run(int dim, double length, int points) {
  const Grid grid(dim, length, points);
  const SystemSpec spec = builtin_model("combustion-exp", {.fuel_diffusivity = 1.0, .product_diffusivity = 2.0});
  const InitialData init = make_initial_data(spec, grid, {.width = 1.5});
  const Trajectory traj = simulate(spec, init, {.horizon = 1.0, .dt = 2e-3, .stride = 5});
  const AuxiliarySet aux = duhamel_split(traj, true);
  const std::vector<double> times{0.5, 1.0};
  double mismatch = 0.0;
  for (int m : {1, 2, 4}) {
    CAPTURE(m);
    const GoodBadSplit split = good_bad_split(traj, 0, 0, m, times);
    REQUIRE(split.good.frame_count() == 2);
    CHECK(split.good.min() >= -1e-14);
    CHECK(split.bad.min() >= -1e-12);
    const GoodBadCheck c = check_good_bad(split, aux, 0, 0, spec.fuel_bound);
    CHECK(c.good_excess <= 1e-3);
    CHECK(c.bad_excess <= 1e-3);
    CHECK(c.combined_excess <= 1e-3);
    mismatch = std::max(mismatch, c.total_mismatch);
  }
  return mismatch;
}

}  // namespace

TEST_CASE("good/bad split reproduces H and obeys the cone bounds") {
  CHECK(good_bad_run(1, 20.0, 256) < 1e-3);
  // In 2D the hat-function quadrature error is visible at this resolution; it is O(dx^2).
  const double coarse = good_bad_run(2, 10.0, 32);
  const double fine = good_bad_run(2, 10.0, 64);
  CHECK(fine < 2e-3);
  CHECK(std::log2(coarse / fine) >= 1.8);
}

TEST_CASE("good/bad split preconditions") {
  const Grid grid(1, 20.0, 64);
  const Trajectory traj = combustion_run(grid, 0.01, 0.5, 5);
  const std::vector<double> early{0.1};
  CHECK(expect::error_kind([&] { (void)good_bad_split(traj, 0, 0, 2, early); }) ==
        ErrorKind::QuadratureUnderresolved);
  const std::vector<double> between{0.23};
  CHECK(expect::error_kind([&] { (void)good_bad_split(traj, 0, 0, 2, between); }) ==
        ErrorKind::PreconditionViolation);
  const std::vector<double> fine{0.5};
  CHECK(expect::error_kind([&] { (void)good_bad_split(traj, 0, 0, 0, fine); }) == ErrorKind::PreconditionViolation);
  CHECK(expect::error_kind([&] { (void)good_bad_split(traj, 1, 0, 2, fine); }) == ErrorKind::IndexOutOfRange);
  const AuxiliarySet aux = duhamel_split(traj);
  CHECK(expect::error_kind([&] { (void)check_good_bad(good_bad_split(traj, 0, 0, 2, fine), aux, 0, 0, 1.0); }) ==
        ErrorKind::PreconditionViolation);
}
