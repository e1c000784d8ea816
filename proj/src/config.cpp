#include "rdb/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "rdb/error.hpp"

namespace rdb {

void ToleranceConfig::scale(double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) fail(ErrorKind::InvalidArgument, "tolerance scale must be positive");
  for (double* t : {&max_principle, &positivity, &reconstruction, &decomposition, &stoichiometric, &goodbad, &l2,
                    &operator_agreement, &plateau, &drift})
    *t *= factor;
}

Grid RunConfig::grid() const { return make_grid(dim, length, points); }

SystemSpec RunConfig::system() const {
  SystemSpec spec;
  if (model == "expression") {
    const int mf = params.fuels, np = params.products;
    if (consumption.size() != static_cast<std::size_t>(mf) || production.size() != static_cast<std::size_t>(np))
      fail(ErrorKind::ConfigParse, "expression model needs model.consumption.1..M and model.production.1..N");
    NonlinearitySpec& nl = spec.nonlinearity;
    nl.name = "expression";
    nl.fuels = mf;
    nl.products = np;
    for (const auto& text : consumption) nl.consumption.push_back(Expression::parse(text, mf, np).as_rate());
    for (const auto& text : production) nl.production.push_back(Expression::parse(text, mf, np).as_rate());
    nl.consumption_text = consumption;
    nl.production_text = production;
    nl.stoichiometry.assign(np, std::vector<double>(mf, 1.0));
    nl.growth_rates.assign(np, std::vector<double>(np, 1.0));
    spec.fuel_diffusivity.assign(mf, params.fuel_diffusivity);
    spec.product_diffusivity.assign(np, params.product_diffusivity);
    spec.order = params.order < 0.0 ? 1.0 : params.order;
    spec.fuel_bound = params.fuel_bound;
    spec.product_bound = params.product_bound;
  } else {
    spec = builtin_model(model, params);
  }
  NonlinearitySpec& nl = spec.nonlinearity;
  if (!stoichiometry.empty()) nl.stoichiometry = stoichiometry;
  if (!growth_rates.empty()) nl.growth_rates = growth_rates;
  if (growth_constant > 0.0) nl.growth_constant = growth_constant;
  if (subexp_order > 0.0) nl.subexp_order = subexp_order;
  if (!fuel_diffusivity.empty()) spec.fuel_diffusivity = fuel_diffusivity;
  if (!product_diffusivity.empty()) spec.product_diffusivity = product_diffusivity;
  spec.validate();
  return spec;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

[[noreturn]] void bad_value(const std::string& where, const std::string& what) {
  fail(ErrorKind::ConfigParse, where + ": " + what);
}

double to_double(const std::string& text, const std::string& where) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto r = std::from_chars(text.data(), end, v);
  if (text.empty() || r.ec != std::errc() || r.ptr != end || !std::isfinite(v))
    bad_value(where, "expected a number, got '" + text + "'");
  return v;
}

long long to_integer(const std::string& text, const std::string& where) {
  long long v = 0;
  const char* end = text.data() + text.size();
  const auto r = std::from_chars(text.data(), end, v);
  if (text.empty() || r.ec != std::errc() || r.ptr != end) bad_value(where, "expected an integer, got '" + text + "'");
  return v;
}

bool to_bool(const std::string& text, const std::string& where) {
  std::string t = text;
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (t == "true" || t == "on" || t == "yes" || t == "1") return true;
  if (t == "false" || t == "off" || t == "no" || t == "0") return false;
  bad_value(where, "expected a boolean, got '" + text + "'");
}

std::vector<double> to_list(const std::string& text, const std::string& where) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(to_double(item, where));
  return out;
}

std::vector<std::vector<double>> to_matrix(const std::string& text, const std::string& where) {
  std::vector<std::vector<double>> out;
  for (const auto& row : split(text, ';')) out.push_back(to_list(row, where));
  for (const auto& row : out)
    if (row.size() != out.front().size()) bad_value(where, "matrix rows differ in length");
  return out;
}

double positive(double v, const std::string& where) {
  if (!(v > 0.0)) bad_value(where, "must be positive");
  return v;
}

int positive_int(long long v, const std::string& where) {
  if (v < 1 || v > (1LL << 30)) bad_value(where, "must be a positive integer");
  return static_cast<int>(v);
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    auto num = [&t](const std::string& key, auto member) {
      t[key] = [member](RunConfig& c, const std::string& v, const std::string& w) { member(c) = to_double(v, w); };
    };
    auto pos = [&t](const std::string& key, auto member) {
      t[key] = [member](RunConfig& c, const std::string& v, const std::string& w) {
        member(c) = positive(to_double(v, w), w);
      };
    };
    auto flag = [&t](const std::string& key, auto member) {
      t[key] = [member](RunConfig& c, const std::string& v, const std::string& w) { member(c) = to_bool(v, w); };
    };

    t["model"] = [](RunConfig& c, const std::string& v, const std::string& w) {
      static const char* known[] = {"combustion-power", "combustion-exp", "frac-subexp", "multi-species", "expression"};
      if (std::find(std::begin(known), std::end(known), v) == std::end(known)) bad_value(w, "unknown model '" + v + "'");
      c.model = v;
    };
    pos("model.m", [](RunConfig& c) -> double& { return c.params.exponent; });
    num("model.beta", [](RunConfig& c) -> double& { return c.params.power; });
    pos("model.rho", [](RunConfig& c) -> double& { return c.params.subexp_order; });
    t["model.fuels"] = [](RunConfig& c, const std::string& v, const std::string& w) {
      c.params.fuels = positive_int(to_integer(v, w), w);
    };
    t["model.products"] = [](RunConfig& c, const std::string& v, const std::string& w) {
      c.params.products = positive_int(to_integer(v, w), w);
    };
    t["model.stoichiometry"] = [](RunConfig& c, const std::string& v, const std::string& w) {
      c.stoichiometry = to_matrix(v, w);
      c.params.stoichiometry = c.stoichiometry;
    };
    t["model.growth_rates"] = [](RunConfig& c, const std::string& v, const std::string& w) {
      c.growth_rates = to_matrix(v, w);
    };
    pos("model.growth_constant", [](RunConfig& c) -> double& { return c.growth_constant; });
    pos("model.subexp_order", [](RunConfig& c) -> double& { return c.subexp_order; });

    t["grid.n"] = [](RunConfig& c, const std::string& v, const std::string& w) {
      const auto n = to_integer(v, w);
      if (n != 1 && n != 2) bad_value(w, "dimension must be 1 or 2");
      c.dim = static_cast<int>(n);
    };
    pos("grid.L", [](RunConfig& c) -> double& { return c.length; });
    t["grid.N"] = [](RunConfig& c, const std::string& v, const std::string& w) {
      c.points = positive_int(to_integer(v, w), w);
    };

    pos("time.T", [](RunConfig& c) -> double& { return c.simulation.horizon; });
    pos("time.dt", [](RunConfig& c) -> double& { return c.simulation.dt; });
    t["time.stride"] = [](RunConfig& c, const std::string& v, const std::string& w) {
      c.simulation.stride = positive_int(to_integer(v, w), w);
    };

    t["diffusion.eta"] = [](RunConfig& c, const std::string& v, const std::string& w) {
      c.fuel_diffusivity = to_list(v, w);
      for (double d : c.fuel_diffusivity) positive(d, w);
      c.params.fuel_diffusivity = c.fuel_diffusivity.front();
    };
    t["diffusion.kappa"] = [](RunConfig& c, const std::string& v, const std::string& w) {
      c.product_diffusivity = to_list(v, w);
      for (double d : c.product_diffusivity) positive(d, w);
      c.params.product_diffusivity = c.product_diffusivity.front();
    };
    t["diffusion.s"] = [](RunConfig& c, const std::string& v, const std::string& w) {
      const double s = to_double(v, w);
      if (!(s > 0.0 && s <= 1.0)) bad_value(w, "order s must lie in (0, 1]");
      c.params.order = s;
    };

    t["init.profile"] = [](RunConfig& c, const std::string& v, const std::string& w) {
      if (v == "bump")
        c.init.profile = InitialProfile::Bump;
      else if (v == "random")
        c.init.profile = InitialProfile::Random;
      else if (v == "constant")
        c.init.profile = InitialProfile::Constant;
      else
        bad_value(w, "profile must be bump, random or constant");
    };
    num("init.K1", [](RunConfig& c) -> double& { return c.params.fuel_bound; });
    num("init.K2", [](RunConfig& c) -> double& { return c.params.product_bound; });
    pos("init.width", [](RunConfig& c) -> double& { return c.init.width; });

    flag("diagnostics.timeline", [](RunConfig& c) -> bool& { return c.diagnostics.timeline; });
    flag("diagnostics.duhamel", [](RunConfig& c) -> bool& { return c.diagnostics.duhamel; });
    flag("diagnostics.decomposition", [](RunConfig& c) -> bool& { return c.diagnostics.decomposition; });
    flag("diagnostics.goodbad", [](RunConfig& c) -> bool& { return c.diagnostics.goodbad; });
    flag("diagnostics.bmo", [](RunConfig& c) -> bool& { return c.diagnostics.bmo; });
    flag("diagnostics.moments", [](RunConfig& c) -> bool& { return c.diagnostics.moments; });
    flag("diagnostics.jn", [](RunConfig& c) -> bool& { return c.diagnostics.jn; });
    flag("diagnostics.operator", [](RunConfig& c) -> bool& { return c.diagnostics.operator_checks; });
    t["diagnostics.goodbad.m"] = [](RunConfig& c, const std::string& v, const std::string& w) {
      c.diagnostics.goodbad_m.clear();
      for (const auto& item : split(v, ',')) c.diagnostics.goodbad_m.push_back(positive_int(to_integer(item, w), w));
    };
    t["diagnostics.goodbad.times"] = [](RunConfig& c, const std::string& v, const std::string& w) {
      c.diagnostics.goodbad_times = to_list(v, w);
    };
    t["diagnostics.moments.Z"] = [](RunConfig& c, const std::string& v, const std::string& w) {
      c.diagnostics.moment_weights = to_list(v, w);
    };
    pos("diagnostics.moments.r", [](RunConfig& c) -> double& { return c.diagnostics.moment_r; });
    t["diagnostics.moments.rho"] = [](RunConfig& c, const std::string& v, const std::string& w) {
      const double rho = to_double(v, w);
      if (!(rho > 0.0 && rho <= 1.0)) bad_value(w, "rho must lie in (0, 1]");
      c.diagnostics.moment_rho = rho;
    };
    t["diagnostics.moments.count"] = [](RunConfig& c, const std::string& v, const std::string& w) {
      c.diagnostics.moment_count = positive_int(to_integer(v, w), w);
    };

    pos("tolerance.max_principle", [](RunConfig& c) -> double& { return c.tolerance.max_principle; });
    pos("tolerance.positivity", [](RunConfig& c) -> double& { return c.tolerance.positivity; });
    pos("tolerance.reconstruction", [](RunConfig& c) -> double& { return c.tolerance.reconstruction; });
    pos("tolerance.decomposition", [](RunConfig& c) -> double& { return c.tolerance.decomposition; });
    pos("tolerance.stoichiometric", [](RunConfig& c) -> double& { return c.tolerance.stoichiometric; });
    pos("tolerance.goodbad", [](RunConfig& c) -> double& { return c.tolerance.goodbad; });
    pos("tolerance.l2", [](RunConfig& c) -> double& { return c.tolerance.l2; });
    pos("tolerance.operator_agreement", [](RunConfig& c) -> double& { return c.tolerance.operator_agreement; });
    pos("tolerance.plateau", [](RunConfig& c) -> double& { return c.tolerance.plateau; });
    pos("tolerance.drift", [](RunConfig& c) -> double& { return c.tolerance.drift; });
    pos("tolerance.jn_r_squared", [](RunConfig& c) -> double& { return c.tolerance.jn_r_squared; });

    pos("solver.clip_tolerance", [](RunConfig& c) -> double& { return c.simulation.clip_tolerance; });
    pos("solver.ceiling", [](RunConfig& c) -> double& { return c.simulation.ceiling; });
    t["solver.on_failure"] = [](RunConfig& c, const std::string& v, const std::string& w) {
      if (v == "stop")
        c.simulation.on_failure = BlowUpPolicy::Stop;
      else if (v == "throw")
        c.simulation.on_failure = BlowUpPolicy::Throw;
      else
        bad_value(w, "on_failure must be stop or throw");
    };

    t["seed"] = [](RunConfig& c, const std::string& v, const std::string& w) {
      const auto s = to_integer(v, w);
      if (s < 0) bad_value(w, "seed must be nonnegative");
      c.seed = static_cast<std::uint64_t>(s);
      c.init.seed = c.seed;
    };
    pos("validation.box.fuel", [](RunConfig& c) -> double& { return c.box.fuel_max; });
    pos("validation.box.product", [](RunConfig& c) -> double& { return c.box.product_max; });
    t["validation.samples"] = [](RunConfig& c, const std::string& v, const std::string& w) {
      c.validation_samples = positive_int(to_integer(v, w), w);
    };
    return t;
  }();
  return table;
}

bool indexed_key(const std::string& key, std::string_view prefix, std::size_t& index) {
  if (key.rfind(prefix, 0) != 0) return false;
  const std::string rest = key.substr(prefix.size());
  if (rest.empty() || !std::all_of(rest.begin(), rest.end(), [](unsigned char ch) { return std::isdigit(ch); }))
    return false;
  index = std::stoul(rest);
  return index >= 1 && index <= 64;
}

}  // namespace

RunConfig parse_config(std::string_view text, std::string_view origin) {
  RunConfig config;
  config.box.fuel_max = -1.0;  // defaults to K1 unless set
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    const std::string content = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (content.empty()) continue;
    const std::string where = std::string(origin) + ":" + std::to_string(number);
    const auto eq = content.find('=');
    if (eq == std::string::npos) bad_value(where, "expected key = value");
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    if (key.empty()) bad_value(where, "empty key");
    if (value.empty()) bad_value(where, "empty value for '" + key + "'");
    if (auto [it, fresh] = seen.emplace(key, number); !fresh)
      bad_value(where, "duplicate key '" + key + "' (first set on line " + std::to_string(it->second) + ")");
    std::size_t index = 0;
    if (indexed_key(key, "model.consumption.", index)) {
      if (config.consumption.size() < index) config.consumption.resize(index);
      config.consumption[index - 1] = value;
      continue;
    }
    if (indexed_key(key, "model.production.", index)) {
      if (config.production.size() < index) config.production.resize(index);
      config.production[index - 1] = value;
      continue;
    }
    const auto& table = setters();
    const auto it = table.find(key);
    if (it == table.end()) bad_value(where, "unknown key '" + key + "'");
    it->second(config, value, where + " (" + key + ")");
  }
  for (const auto* list : {&config.consumption, &config.production})
    for (const auto& e : *list)
      if (e.empty()) fail(ErrorKind::ConfigParse, std::string(origin) + ": reaction terms must be numbered 1, 2, ...");
  if (config.box.fuel_max < 0.0) config.box.fuel_max = std::max(config.params.fuel_bound, 1e-12);
  if (config.simulation.dt > config.simulation.horizon)
    fail(ErrorKind::ConfigParse, std::string(origin) + ": time.dt exceeds time.T");
  // Surface model-level errors at load time.
  try {
    (void)config.system();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::ConfigParse) throw;
    fail(ErrorKind::ConfigParse, std::string(origin) + ": " + e.what());
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::ConfigParse, "cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, _] : setters()) keys.push_back(k);
  keys.push_back("model.consumption.<i>");
  keys.push_back("model.production.<j>");
  std::sort(keys.begin(), keys.end());
  return keys;
}

}  // namespace rdb
