#include "rdb/systems.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>

#include "rdb/error.hpp"

namespace rdb {

namespace {

bool finite_positive(double x) { return std::isfinite(x) && x > 0.0; }

std::string number_text(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

// Largest value of v^rho - v over v >= 0.
double subexp_gap(double rho) {
  if (rho >= 1.0) return 0.0;
  const double v = std::pow(rho, 1.0 / (1.0 - rho));
  return std::pow(v, rho) - v;
}

std::vector<std::vector<double>> ones(int rows, int cols) {
  return std::vector<std::vector<double>>(rows, std::vector<double>(cols, 1.0));
}

}  // namespace

void NonlinearitySpec::validate() const {
  if (fuels < 1 || products < 1) fail(ErrorKind::InvalidArgument, "fuel and product counts must be at least 1");
  if (consumption.size() != static_cast<std::size_t>(fuels))
    fail(ErrorKind::InvalidArgument, "need one consumption term per fuel");
  if (production.size() != static_cast<std::size_t>(products))
    fail(ErrorKind::InvalidArgument, "need one production term per product");
  for (const auto& f : consumption)
    if (!f) fail(ErrorKind::InvalidArgument, "empty consumption term");
  for (const auto& f : production)
    if (!f) fail(ErrorKind::InvalidArgument, "empty production term");
  if (stoichiometry.size() != static_cast<std::size_t>(products))
    fail(ErrorKind::InvalidArgument, "stoichiometry must have one row per product");
  for (const auto& row : stoichiometry) {
    if (row.size() != static_cast<std::size_t>(fuels))
      fail(ErrorKind::InvalidArgument, "stoichiometry must have one column per fuel");
    for (double a : row)
      if (!std::isfinite(a) || a < 0.0) fail(ErrorKind::InvalidArgument, "stoichiometry entries must be nonnegative");
  }
  if (growth_rates.size() != static_cast<std::size_t>(products))
    fail(ErrorKind::InvalidArgument, "growth rates must have one row per product");
  for (const auto& row : growth_rates) {
    if (row.size() != static_cast<std::size_t>(products))
      fail(ErrorKind::InvalidArgument, "growth rate rows must have one entry per product");
    for (double z : row)
      if (!finite_positive(z)) fail(ErrorKind::InvalidArgument, "growth rate entries must be positive");
  }
  if (!finite_positive(growth_constant)) fail(ErrorKind::InvalidArgument, "growth constant must be positive");
  if (!(subexp_order > 0.0 && subexp_order <= 1.0))
    fail(ErrorKind::InvalidArgument, "sub-exponential order must lie in (0, 1]");
}

void SystemSpec::validate() const {
  nonlinearity.validate();
  if (fuel_diffusivity.size() != static_cast<std::size_t>(fuels()))
    fail(ErrorKind::InvalidArgument, "need one diffusivity per fuel");
  if (product_diffusivity.size() != static_cast<std::size_t>(products()))
    fail(ErrorKind::InvalidArgument, "need one diffusivity per product");
  for (double d : fuel_diffusivity)
    if (!finite_positive(d)) fail(ErrorKind::NonpositiveDiffusivity, "fuel diffusivity must be positive");
  for (double d : product_diffusivity)
    if (!finite_positive(d)) fail(ErrorKind::NonpositiveDiffusivity, "product diffusivity must be positive");
  if (!(order > 0.0 && order <= 1.0)) fail(ErrorKind::InvalidOrder, "fractional order must lie in (0, 1]");
  if (!std::isfinite(fuel_bound) || fuel_bound < 0.0 || !std::isfinite(product_bound) || product_bound < 0.0)
    fail(ErrorKind::InvalidArgument, "initial-data bounds must be nonnegative");
}

SystemSpec builtin_model(std::string_view name, const ModelParameters& params) {
  SystemSpec spec;
  NonlinearitySpec& nl = spec.nonlinearity;
  nl.name = std::string(name);
  const double m = params.exponent;
  const double k1 = std::max(1.0, params.fuel_bound);
  double default_order = 1.0;

  if (name == "combustion-power" || name == "combustion-exp") {
    if (!std::isfinite(m) || m <= 0.0) fail(ErrorKind::InvalidArgument, "exponent m must be positive");
    const bool power = name == "combustion-power";
    const double beta = params.power;
    if (power && (!std::isfinite(beta) || beta < 0.0)) fail(ErrorKind::InvalidArgument, "power beta must be nonnegative");
    RateFunction rate;
    std::string text;
    if (power) {
      rate = [m, beta](std::span<const double> u, std::span<const double> v) {
        return std::pow(u[0], m) * std::pow(v[0], beta);
      };
      text = "pow(u, " + number_text(m) + ") * pow(v, " + number_text(beta) + ")";
      // v^beta e^{-v} peaks at v = beta.
      nl.growth_constant = std::pow(k1, m) * std::max(std::pow(beta / std::exp(1.0), beta), 1e-300);
    } else {
      rate = [m](std::span<const double> u, std::span<const double> v) { return std::pow(u[0], m) * std::exp(v[0]); };
      text = "pow(u, " + number_text(m) + ") * exp(v)";
      nl.growth_constant = std::pow(k1, m);
    }
    nl.consumption = {rate};
    nl.production = {rate};
    nl.consumption_text = {text};
    nl.production_text = {text};
    nl.stoichiometry = {{1.0}};
    nl.growth_rates = {{1.0}};
  } else if (name == "frac-subexp") {
    const double rho = params.subexp_order;
    if (!(rho > 0.0 && rho <= 1.0)) fail(ErrorKind::InvalidArgument, "sub-exponential order must lie in (0, 1]");
    RateFunction rate = [rho](std::span<const double> u, std::span<const double> v) {
      return u[0] * std::exp(std::pow(v[0], rho));
    };
    const std::string text = "u * exp(pow(v, " + number_text(rho) + "))";
    nl.consumption = {rate};
    nl.production = {rate};
    nl.consumption_text = {text};
    nl.production_text = {text};
    nl.stoichiometry = {{1.0}};
    nl.growth_rates = {{1.0}};
    nl.subexp_order = rho;
    nl.growth_constant = k1 * std::exp(subexp_gap(rho));
    default_order = 0.5;
  } else if (name == "multi-species") {
    const int mf = params.fuels;
    const int np = params.products;
    if (mf < 1 || np < 1) fail(ErrorKind::InvalidArgument, "multi-species needs at least one fuel and one product");
    nl.fuels = mf;
    nl.products = np;
    nl.stoichiometry = params.stoichiometry.empty() ? ones(np, mf) : params.stoichiometry;
    if (nl.stoichiometry.size() != static_cast<std::size_t>(np))
      fail(ErrorKind::InvalidArgument, "stoichiometry must have one row per product");
    for (int i = 0; i < mf; ++i) {
      nl.consumption.push_back([i](std::span<const double> u, std::span<const double> v) {
        return u[i] * std::accumulate(v.begin(), v.end(), 0.0);
      });
      nl.consumption_text.push_back("u" + std::to_string(i + 1) + " * (sum of v)");
    }
    double row_max = 0.0;
    for (int j = 0; j < np; ++j) {
      const std::vector<double> row = nl.stoichiometry[j];
      if (row.size() != static_cast<std::size_t>(mf))
        fail(ErrorKind::InvalidArgument, "stoichiometry must have one column per fuel");
      row_max = std::max(row_max, std::accumulate(row.begin(), row.end(), 0.0));
      nl.production.push_back([row](std::span<const double> u, std::span<const double> v) {
        const double total = std::accumulate(v.begin(), v.end(), 0.0);
        double f = 0.0;
        for (std::size_t i = 0; i < row.size(); ++i) f += row[i] * u[i] * total;
        return f;
      });
      nl.production_text.push_back("sum_i A" + std::to_string(j + 1) + "i * p_i");
    }
    nl.growth_rates = ones(np, np);
    // A u V <= rowsum K1 V <= rowsum K1 e^{V} / e.
    nl.growth_constant = k1 * std::max(1.0, row_max) / std::exp(1.0);
  } else {
    fail(ErrorKind::UnknownModel, "unknown model '" + std::string(name) + "'");
  }

  spec.fuel_diffusivity.assign(nl.fuels, params.fuel_diffusivity);
  spec.product_diffusivity.assign(nl.products, params.product_diffusivity);
  spec.order = params.order < 0.0 ? default_order : params.order;
  spec.fuel_bound = params.fuel_bound;
  spec.product_bound = params.product_bound;
  spec.validate();
  return spec;
}

bool AssumptionReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const AssumptionCheck& c) { return c.passed(); });
}

const AssumptionCheck& AssumptionReport::find(std::string_view anchor) const {
  for (const auto& c : checks)
    if (c.anchor == anchor) return c;
  fail(ErrorKind::IndexOutOfRange, "no assumption check '" + std::string(anchor) + "'");
}

namespace {

double radical_inverse(std::uint64_t index, unsigned base) {
  double result = 0.0;
  double scale = 1.0 / base;
  while (index > 0) {
    result += static_cast<double>(index % base) * scale;
    index /= base;
    scale /= base;
  }
  return result;
}

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

class Tally {
 public:
  Tally(std::string name, std::string anchor) {
    check_.name = std::move(name);
    check_.anchor = std::move(anchor);
  }

  // One sample asserting lo <= value <= hi, with excess measured relative to the bound.
  void between(double value, double lo, double hi) {
    ++check_.samples;
    const double above = hi == HUGE_VAL ? -HUGE_VAL : (value - hi) / std::max(1.0, std::abs(hi));
    const double below = lo == -HUGE_VAL ? -HUGE_VAL : (lo - value) / std::max(1.0, std::abs(lo));
    const double excess = std::max(above, below);
    if (!std::isfinite(value) || std::isnan(hi) || std::isnan(excess) || excess > kTolerance) {
      ++check_.violations;
      check_.worst_excess = std::max(check_.worst_excess, std::isfinite(excess) ? excess : HUGE_VAL);
    }
  }

  void at_most(double value, double hi) { between(value, -HUGE_VAL, hi); }
  void at_least(double value, double lo) { between(value, lo, HUGE_VAL); }
  void equals_zero(double value) { between(value, 0.0, 0.0); }

  AssumptionCheck take() { return std::move(check_); }

 private:
  static constexpr double kTolerance = 1e-12;
  AssumptionCheck check_;
};

}  // namespace

AssumptionReport validate_assumptions(const NonlinearitySpec& spec, const DomainBox& box, int sample_count) {
  spec.validate();
  if (sample_count < 1000) fail(ErrorKind::PreconditionViolation, "sample count must be at least 1000");
  if (std::isnan(box.fuel_max) || std::isnan(box.product_max))
    fail(ErrorKind::InvalidArgument, "domain box bounds must be numbers");
  if (!(box.fuel_max > 0.0) || !(box.product_max > 0.0))
    fail(ErrorKind::EmptyDomain, "domain box must have positive extent in the nonnegative orthant");

  const int mf = spec.fuels;
  const int np = spec.products;
  const int dim = mf + np;
  if (dim > static_cast<int>(std::size(kPrimes))) fail(ErrorKind::InvalidArgument, "too many species to sample");
  const bool subexp = spec.subexp_order < 1.0;
  const double c = spec.growth_constant;

  Tally face_sign("f_j >= 0 on v_j = 0 and p_i = 0 on u_i = 0", "sep930_1");
  Tally consumption_sign("p_i >= 0", "sep930_3");
  Tally growth("0 <= f_j <= C exp(Z_j . V)", "feb1110");
  Tally stoich("f_j <= sum_i A_ji p_i", "sep930_2");
  Tally upper("f_j <= C exp(C |V|^rho)", "upperbounds");
  Tally no_fuel("p_i = 0 without fuel", "positivity");
  Tally ratio("f_j <= C sum_i p_i", "feb1406");

  std::vector<double> u(mf), v(np), p(mf), f(np);
  // zero_fuel / zero_product name the face a point lies on, or -1.
  auto evaluate = [&](int zero_fuel, int zero_product) {
    for (int i = 0; i < mf; ++i) p[i] = spec.consumption[i](u, v);
    for (int j = 0; j < np; ++j) f[j] = spec.production[j](u, v);
    const double total_v = std::accumulate(v.begin(), v.end(), 0.0);
    const double total_p = std::accumulate(p.begin(), p.end(), 0.0);
    const bool fuel_free = std::all_of(u.begin(), u.end(), [](double x) { return x == 0.0; });

    for (int i = 0; i < mf; ++i) consumption_sign.at_least(p[i], 0.0);
    if (zero_product >= 0) face_sign.at_least(f[zero_product], 0.0);
    if (zero_fuel >= 0) face_sign.equals_zero(p[zero_fuel]);
    for (int j = 0; j < np; ++j) {
      double exponent = 0.0;
      for (int k = 0; k < np; ++k) exponent += spec.growth_rates[j][k] * v[k];
      growth.between(f[j], 0.0, c * std::exp(exponent));
      double bound = 0.0;
      for (int i = 0; i < mf; ++i) bound += spec.stoichiometry[j][i] * p[i];
      stoich.at_most(f[j], bound);
      if (subexp) {
        upper.at_most(f[j], c * std::exp(c * std::pow(total_v, spec.subexp_order)));
        ratio.at_most(f[j], c * total_p);
      }
    }
    if (subexp && fuel_free)
      for (int i = 0; i < mf; ++i) no_fuel.equals_zero(p[i]);
  };

  auto place = [&](std::uint64_t index, int zero_fuel, int zero_product) {
    for (int i = 0; i < mf; ++i) u[i] = box.fuel_max * radical_inverse(index, kPrimes[i]);
    for (int j = 0; j < np; ++j) v[j] = box.product_max * radical_inverse(index, kPrimes[mf + j]);
    if (zero_fuel >= 0) u[zero_fuel] = 0.0;
    if (zero_product >= 0) v[zero_product] = 0.0;
    evaluate(zero_fuel, zero_product);
  };

  // Interior, then every face, then the vertices of the box.
  for (int k = 1; k <= sample_count; ++k) place(static_cast<std::uint64_t>(k), -1, -1);
  const int face_count = std::max(256, sample_count / 8);
  for (int i = 0; i < mf; ++i)
    for (int k = 1; k <= face_count; ++k) place(static_cast<std::uint64_t>(k), i, -1);
  for (int j = 0; j < np; ++j)
    for (int k = 1; k <= face_count; ++k) place(static_cast<std::uint64_t>(k), -1, j);
  if (dim <= 12) {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << dim); ++mask) {
      int zero_fuel = -1;
      int zero_product = -1;
      for (int i = 0; i < mf; ++i) {
        const bool high = (mask >> i) & 1U;
        u[i] = high ? box.fuel_max : 0.0;
        if (!high) zero_fuel = i;
      }
      for (int j = 0; j < np; ++j) {
        const bool high = (mask >> (mf + j)) & 1U;
        v[j] = high ? box.product_max : 0.0;
        if (!high) zero_product = j;
      }
      evaluate(zero_fuel, zero_product);
    }
  }

  AssumptionReport report;
  report.checks.push_back(face_sign.take());
  report.checks.push_back(consumption_sign.take());
  report.checks.push_back(growth.take());
  report.checks.push_back(stoich.take());
  if (subexp) {
    report.checks.push_back(upper.take());
    report.checks.push_back(no_fuel.take());
    report.checks.push_back(ratio.take());
  }
  return report;
}

}  // namespace rdb
