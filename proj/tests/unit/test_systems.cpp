#include <doctest.h>

#include <array>
#include <cmath>
#include <random>

#include "rdb/error.hpp"
#include "rdb/systems.hpp"
#include "support/expect.hpp"

using namespace rdb;

namespace {

double eval(const std::string& text, std::vector<double> u, std::vector<double> v) {
  return Expression::parse(text, static_cast<int>(u.size()), static_cast<int>(v.size())).evaluate(u, v);
}

NonlinearitySpec scalar_spec(std::string p, std::string f, double a, double z, double c) {
  NonlinearitySpec spec;
  spec.name = "test";
  spec.consumption = {Expression::parse(p, 1, 1).as_rate()};
  spec.production = {Expression::parse(f, 1, 1).as_rate()};
  spec.consumption_text = {p};
  spec.production_text = {f};
  spec.stoichiometry = {{a}};
  spec.growth_rates = {{z}};
  spec.growth_constant = c;
  return spec;
}

}  // namespace

TEST_CASE("expression arithmetic and precedence") {
  CHECK(eval("1 + 2 * 3", {0}, {0}) == 7.0);
  CHECK(eval("(1 + 2) * 3", {0}, {0}) == 9.0);
  CHECK(eval("-(1 + 2)", {0}, {0}) == -3.0);
  CHECK(eval("8 / 4 / 2", {0}, {0}) == 1.0);
  CHECK(eval("2 - 3 - 4", {0}, {0}) == -5.0);
  CHECK(eval("1.5e-3 * 2", {0}, {0}) == doctest::Approx(3e-3));
  CHECK(eval("pow(u, 2) * exp(v)", {2.0}, {1.0}) == doctest::Approx(4.0 * std::exp(1.0)));
  CHECK(eval("u1 * (v1 + v2)", {3.0}, {1.0, 2.0}) == 9.0);
  CHECK(eval("u2 - u1", {1.0, 5.0}, {0.0}) == 4.0);
  CHECK(eval("--u", {2.0}, {0.0}) == 2.0);
}

TEST_CASE("expression errors are config-parse errors") {
  for (const char* bad : {"", "1 +", "(u", "u)", "foo(u)", "w", "u2", "v0", "pow(u)", "exp u", "1 $ 2", "u v"}) {
    CAPTURE(bad);
    CHECK(expect::error_kind([&] { (void)Expression::parse(bad, 1, 1); }) == ErrorKind::ConfigParse);
  }
  // The bare aliases only exist for a single species.
  CHECK(expect::error_kind([] { (void)Expression::parse("u", 2, 1); }) == ErrorKind::ConfigParse);
  CHECK(expect::error_kind([] { (void)Expression::parse("v", 1, 3); }) == ErrorKind::ConfigParse);
}

TEST_CASE("rate from an expression matches direct evaluation") {
  const Expression e = Expression::parse("u * exp(pow(v, 0.5))", 1, 1);
  const RateFunction r = e.as_rate();
  for (double u : {0.0, 0.3, 1.0})
    for (double v : {0.0, 2.0, 20.0}) {
      const std::array<double, 1> uu{u}, vv{v};
      CHECK(r(uu, vv) == u * std::exp(std::sqrt(v)));
    }
  CHECK(e.text() == "u * exp(pow(v, 0.5))");
}

TEST_CASE("builtin models") {
  const std::array<double, 1> u{0.5}, v{3.0};
  SUBCASE("combustion-power(1, 2) is u v^2 with A = [1]") {
    const SystemSpec s = builtin_model("combustion-power", {.exponent = 1.0, .power = 2.0});
    CHECK(s.nonlinearity.consumption[0](u, v) == doctest::Approx(4.5));
    CHECK(s.nonlinearity.production[0](u, v) == doctest::Approx(4.5));
    CHECK(s.nonlinearity.stoichiometry == std::vector<std::vector<double>>{{1.0}});
    CHECK(s.order == 1.0);
  }
  SUBCASE("combustion-exp(1) is u e^v") {
    const SystemSpec s = builtin_model("combustion-exp");
    CHECK(s.nonlinearity.consumption[0](u, v) == doctest::Approx(0.5 * std::exp(3.0)));
    const SystemSpec s2 = builtin_model("combustion-exp", {.exponent = 2.0});
    CHECK(s2.nonlinearity.consumption[0](u, v) == doctest::Approx(0.25 * std::exp(3.0)));
  }
  SUBCASE("frac-subexp(1/2) produces u e^sqrt(v)") {
    const SystemSpec s = builtin_model("frac-subexp", {.subexp_order = 0.5});
    CHECK(s.nonlinearity.production[0](u, v) == doctest::Approx(0.5 * std::exp(std::sqrt(3.0))));
    CHECK(s.nonlinearity.subexp_order == 0.5);
    CHECK(s.order == 0.5);
    const AssumptionReport r = validate_assumptions(s.nonlinearity, {1.0, 20.0});
    CHECK(r.find("upperbounds").passed());
    CHECK(r.find("upperbounds").samples > 0);
  }
  SUBCASE("multi-species shapes") {
    const SystemSpec s = builtin_model("multi-species", {.fuels = 2, .products = 3});
    CHECK(s.fuels() == 2);
    CHECK(s.products() == 3);
    CHECK(s.fuel_diffusivity.size() == 2);
    CHECK(s.product_diffusivity.size() == 3);
    const std::array<double, 2> uu{0.5, 0.25};
    const std::array<double, 3> vv{1.0, 2.0, 3.0};
    CHECK(s.nonlinearity.consumption[1](uu, vv) == doctest::Approx(0.25 * 6.0));
    CHECK(s.nonlinearity.production[2](uu, vv) == doctest::Approx(0.75 * 6.0));
  }
  CHECK(expect::error_kind([] { (void)builtin_model("bogus"); }) == ErrorKind::UnknownModel);
  CHECK(expect::error_kind([] { (void)builtin_model("combustion-exp", {.fuel_diffusivity = 0.0}); }) ==
        ErrorKind::NonpositiveDiffusivity);
  CHECK(expect::error_kind([] { (void)builtin_model("combustion-exp", {.order = 1.5}); }) == ErrorKind::InvalidOrder);
}

TEST_CASE("validator: combustion uv with Z slightly above one passes") {
  const NonlinearitySpec spec = scalar_spec("u * v", "u * v", 1.0, 1.01, 10.0);
  const AssumptionReport r = validate_assumptions(spec, {1.0, 20.0});
  CHECK(r.passed());
  for (const auto& c : r.checks) CHECK(c.samples >= 1000);
}

TEST_CASE("validator: f = 2p breaks only the stoichiometric bound") {
  const NonlinearitySpec spec = scalar_spec("u * v", "2 * u * v", 1.0, 1.0, 10.0);
  const AssumptionReport r = validate_assumptions(spec, {1.0, 20.0});
  CHECK_FALSE(r.passed());
  const auto& stoich = r.find("sep930_2");
  // Every sample off the faces has p > 0 and so violates.
  CHECK(stoich.violations >= 4096);
  CHECK(stoich.worst_excess > 0.5);
  CHECK(r.find("sep930_1").passed());
  CHECK(r.find("sep930_3").passed());
  CHECK(r.find("feb1110").passed());
}

TEST_CASE("validator: p = u vanishes on the u = 0 face") {
  const NonlinearitySpec spec = scalar_spec("u", "u", 1.0, 1.0, 1.0);
  CHECK(validate_assumptions(spec, {1.0, 20.0}).find("sep930_1").passed());
  // p = u + 1 does not vanish there.
  const NonlinearitySpec bad = scalar_spec("u + 1", "u", 1.0, 1.0, 1.0);
  CHECK_FALSE(validate_assumptions(bad, {1.0, 20.0}).find("sep930_1").passed());
}

TEST_CASE("validator: each inequality detects its own violation") {
  CHECK_FALSE(validate_assumptions(scalar_spec("u * v - 1", "0", 1.0, 1.0, 1.0), {1.0, 20.0}).find("sep930_3").passed());
  CHECK_FALSE(validate_assumptions(scalar_spec("u * exp(2 * v)", "u * exp(2 * v)", 1.0, 1.0, 1.0), {1.0, 20.0})
                  .find("feb1110")
                  .passed());
  // Negative production off the v = 0 face breaks the lower half of the growth bound.
  CHECK_FALSE(validate_assumptions(scalar_spec("u", "u * (1 - v)", 1.0, 1.0, 1.0), {1.0, 20.0}).find("feb1110").passed());
  // Negative production on the v = 0 face breaks the face condition.
  CHECK_FALSE(validate_assumptions(scalar_spec("u", "v - u", 1.0, 1.0, 1.0), {1.0, 20.0}).find("sep930_1").passed());

  NonlinearitySpec sub = scalar_spec("u * exp(v)", "u * exp(v)", 1.0, 1.0, 2.0);
  sub.subexp_order = 0.5;
  const AssumptionReport r = validate_assumptions(sub, {1.0, 20.0});
  CHECK_FALSE(r.find("upperbounds").passed());
  CHECK(r.find("positivity").passed());
  CHECK(r.find("feb1406").passed());
}

TEST_CASE("every builtin model passes on [0, K1] x [0, 20]^N") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> entry(0.0, 2.0);
  for (double k1 : {0.5, 1.0, 3.0}) {
    CAPTURE(k1);
    for (double m : {1.0, 2.0, 3.5}) {
      for (double beta : {0.0, 1.0, 2.0, 5.0}) {
        const SystemSpec s = builtin_model("combustion-power", {.exponent = m, .power = beta, .fuel_bound = k1});
        CHECK(validate_assumptions(s.nonlinearity, {k1, 20.0}).passed());
      }
      const SystemSpec e = builtin_model("combustion-exp", {.exponent = m, .fuel_bound = k1});
      CHECK(validate_assumptions(e.nonlinearity, {k1, 20.0}).passed());
    }
    for (double rho : {0.25, 0.5, 0.9, 1.0}) {
      const SystemSpec f = builtin_model("frac-subexp", {.subexp_order = rho, .fuel_bound = k1});
      CHECK(validate_assumptions(f.nonlinearity, {k1, 20.0}).passed());
    }
    for (auto [mf, np] : {std::pair{1, 1}, std::pair{2, 3}, std::pair{3, 2}}) {
      std::vector<std::vector<double>> a(np, std::vector<double>(mf));
      for (auto& row : a)
        for (double& x : row) x = entry(rng);
      const SystemSpec ms =
          builtin_model("multi-species", {.fuels = mf, .products = np, .fuel_bound = k1, .stoichiometry = a});
      CHECK(validate_assumptions(ms.nonlinearity, {k1, 20.0}).passed());
    }
  }
}

TEST_CASE("multi-species attains the stoichiometric bound with equality") {
  const std::vector<std::vector<double>> a{{0.5, 1.5}, {2.0, 0.0}};
  const SystemSpec s = builtin_model("multi-species", {.fuels = 2, .products = 2, .stoichiometry = a});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::array<double, 2> u{unit(rng), unit(rng)};
    const std::array<double, 2> v{20.0 * unit(rng), 20.0 * unit(rng)};
    for (int j = 0; j < 2; ++j) {
      double bound = 0.0;
      for (int i = 0; i < 2; ++i) bound += a[j][i] * s.nonlinearity.consumption[i](u, v);
      CHECK(s.nonlinearity.production[j](u, v) == doctest::Approx(bound).epsilon(1e-14));
    }
  }
  CHECK(validate_assumptions(s.nonlinearity, {1.0, 20.0}).find("sep930_2").worst_excess <= 1e-12);
}

TEST_CASE("validator preconditions") {
  const NonlinearitySpec spec = scalar_spec("u", "u", 1.0, 1.0, 1.0);
  CHECK(expect::error_kind([&] { (void)validate_assumptions(spec, {1.0, 20.0}, 999); }) ==
        ErrorKind::PreconditionViolation);
  CHECK(expect::error_kind([&] { (void)validate_assumptions(spec, {0.0, 20.0}); }) == ErrorKind::EmptyDomain);
  CHECK(expect::error_kind([&] { (void)validate_assumptions(spec, {1.0, -1.0}); }) == ErrorKind::EmptyDomain);
  NonlinearitySpec broken = spec;
  broken.stoichiometry = {{-1.0}};
  CHECK(expect::error_kind([&] { (void)validate_assumptions(broken, {1.0, 20.0}); }) == ErrorKind::InvalidArgument);
  broken = spec;
  broken.growth_rates = {{0.0}};
  CHECK(expect::error_kind([&] { broken.validate(); }) == ErrorKind::InvalidArgument);
  CHECK(expect::error_kind([&] { (void)validate_assumptions(spec, {1.0, 20.0}).find("nope"); }) ==
        ErrorKind::IndexOutOfRange);
}
