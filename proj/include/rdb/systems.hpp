#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rdb {

/// Reaction rate as a function of the fuel vector U and the product vector V.
using RateFunction = std::function<double(std::span<const double> u, std::span<const double> v)>;

/// Arithmetic expression over u1..uM and v1..vN with + - * /, unary minus,
/// parentheses, exp(x) and pow(x, y). With one fuel and one product, `u` and `v`
/// are accepted as aliases.
class Expression {
 public:
  static Expression parse(std::string_view text, int fuels, int products);

  double evaluate(std::span<const double> u, std::span<const double> v) const;
  const std::string& text() const noexcept { return text_; }
  RateFunction as_rate() const;

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

/// Reaction terms of a fuel/product system together with the constants that
/// certify its structural assumptions.
struct NonlinearitySpec {
  std::string name;
  int fuels = 1;
  int products = 1;
  std::vector<RateFunction> consumption;  ///< p_i, one per fuel
  std::vector<RateFunction> production;   ///< f_j, one per product
  std::vector<std::string> consumption_text;
  std::vector<std::string> production_text;
  /// products x fuels, nonnegative: f_j <= sum_i A_ji p_i.
  std::vector<std::vector<double>> stoichiometry;
  /// products x products, positive: f_j <= C exp(Z_j . V).
  std::vector<std::vector<double>> growth_rates;
  double growth_constant = 1.0;
  /// rho in (0, 1]; rho < 1 adds the bound f <= C exp(C v^rho).
  double subexp_order = 1.0;

  /// Throws invalid-argument if the shapes or sign constraints are broken.
  void validate() const;
};

struct SystemSpec {
  NonlinearitySpec nonlinearity;
  std::vector<double> fuel_diffusivity;     ///< eta_i
  std::vector<double> product_diffusivity;  ///< kappa_j
  double order = 1.0;                       ///< s
  double fuel_bound = 1.0;                  ///< K1
  double product_bound = 0.0;               ///< K2

  int fuels() const noexcept { return nonlinearity.fuels; }
  int products() const noexcept { return nonlinearity.products; }
  void validate() const;
};

struct ModelParameters {
  double exponent = 1.0;       ///< m
  double power = 2.0;          ///< beta for combustion-power
  double subexp_order = 0.5;   ///< rho for frac-subexp
  int fuels = 1;
  int products = 1;
  double fuel_bound = 1.0;
  double product_bound = 0.0;
  double fuel_diffusivity = 1.0;
  double product_diffusivity = 1.0;
  double order = -1.0;  ///< negative selects the model default (1, or 0.5 for frac-subexp)
  std::vector<std::vector<double>> stoichiometry;  ///< multi-species A; empty means all ones
};

/// combustion-power, combustion-exp, frac-subexp or multi-species.
SystemSpec builtin_model(std::string_view name, const ModelParameters& params = {});

struct DomainBox {
  double fuel_max = 1.0;
  double product_max = 20.0;
};

struct AssumptionCheck {
  std::string name;
  std::string anchor;
  int samples = 0;
  int violations = 0;
  /// Largest lhs - rhs seen, relative to max(1, |rhs|).
  double worst_excess = 0.0;

  bool passed() const noexcept { return violations == 0; }
};

struct AssumptionReport {
  std::vector<AssumptionCheck> checks;

  bool passed() const;
  const AssumptionCheck& find(std::string_view anchor) const;
};

/// Evaluates every structural inequality on Halton samples of the box, on the
/// faces u_i = 0 and v_j = 0, and on the box vertices.
AssumptionReport validate_assumptions(const NonlinearitySpec& spec, const DomainBox& box, int sample_count = 4096);

}  // namespace rdb
