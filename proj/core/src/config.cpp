#include "semigap/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "semigap/errors.hpp"

namespace semigap {

namespace {

using Section = std::map<std::string, std::string>;

const std::map<std::string, std::vector<std::string>>& known_keys() {
  static const std::map<std::string, std::vector<std::string>> keys{
      {"", {"problem", "method"}},
      {"problem", {"name", "T", "lambda", "grid_n", "nodes", "speed"}},
      {"method", {"name", "mu", "courant"}},
      {"sampling",
       {"cloud", "lower", "upper", "count", "radius", "seed", "norm", "cap", "cap_slope", "t_count",
        "points"}},
      {"ladders", {"dt0", "depth", "rho_local", "rho0", "rho_depth", "theta_factor"}},
      {"tolerances",
       {"consistency_tol", "convergence_tol", "growth_tol", "gap_tau", "q_min", "fit_residual_max",
        "slack", "zero_tol", "divergence_factor", "min_pairs"}},
      {"output", {"dir", "format"}},
  };
  return keys;
}

std::string dotted(const std::string& section, const std::string& key) {
  return section.empty() ? key : section + "." + key;
}

std::string unquote(std::string s) {
  if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') || (s.front() == '\'' && s.back() == '\''))) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "infinity") return std::numeric_limits<double>::infinity();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigValidationError(key, "expected a number, got '" + text + "'");
  }
  return value;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigValidationError(key, "expected a non-negative integer, got '" + text + "'");
  }
  return value;
}

std::vector<State> parse_points(const std::string& key, const std::string& text) {
  std::vector<State> out;
  std::stringstream rows(text);
  std::string row;
  while (std::getline(rows, row, ';')) {
    if (trim(row).empty()) continue;
    std::vector<double> coords;
    std::stringstream cells(row);
    std::string cell;
    while (std::getline(cells, cell, ',')) coords.push_back(parse_double(key, cell));
    out.emplace_back(std::move(coords));
  }
  return out;
}

/// The ini parser rejects a top-level `problem = ...` next to a [problem]
/// section, so the two shorthands are renamed before parsing.
std::string rename_shorthands(std::string_view text) {
  std::istringstream lines{std::string(text)};
  std::string out;
  std::string line;
  bool preamble = true;
  while (std::getline(lines, line)) {
    const std::string t = trim(line);
    if (!t.empty() && t.front() == '[') preamble = false;
    const auto eq = t.find('=');
    if (preamble && eq != std::string::npos) {
      const std::string key = trim(std::string_view(t).substr(0, eq));
      if (key == "problem" || key == "method") line = "@" + t;
    }
    out += line;
    out += '\n';
  }
  return out;
}

std::map<std::string, Section> read_sections(std::string_view text) {
  boost::property_tree::ptree tree;
  std::istringstream in{rename_shorthands(text)};
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigParseError("config parse error at line " + std::to_string(e.line()) + ": " + e.message());
  }
  std::map<std::string, Section> out;
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      if (node.data().empty() && known_keys().count(name) > 0) continue;
      out[""][name.front() == '@' ? name.substr(1) : name] = unquote(trim(node.data()));
      continue;
    }
    Section& section = out[name];
    for (const auto& [key, leaf] : node) section[key] = unquote(trim(leaf.data()));
  }
  for (const auto& [name, section] : out) {
    const auto known = known_keys().find(name);
    if (known == known_keys().end()) {
      throw ConfigValidationError(name, "unknown section [" + name + "]");
    }
    for (const auto& [key, value] : section) {
      bool ok = false;
      for (const std::string& k : known->second) ok = ok || k == key;
      if (!ok) throw ConfigValidationError(dotted(name, key), "unknown key '" + dotted(name, key) + "'");
    }
  }
  return out;
}

NormSpec effective_norm(const NormSpec& base, std::optional<NormKind> kind) {
  if (!kind) return base;
  NormSpec out = base;
  out.kind = *kind;
  if (*kind != NormKind::weighted_l2) out.weight = 1.0;
  return out;
}

void require(bool ok, const std::string& key, const std::string& message) {
  if (!ok) throw ConfigValidationError(key, key + " " + message);
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
  std::map<std::string, Section> s = read_sections(text);
  auto get = [&](const std::string& section, const std::string& key) -> const std::string* {
    const auto sec = s.find(section);
    if (sec == s.end()) return nullptr;
    const auto it = sec->second.find(key);
    return it == sec->second.end() ? nullptr : &it->second;
  };
  auto number = [&](const std::string& section, const std::string& key, auto& field) {
    if (const std::string* v = get(section, key)) {
      using T = std::remove_reference_t<decltype(field)>;
      if constexpr (std::is_floating_point_v<T>) {
        field = parse_double(dotted(section, key), *v);
      } else {
        field = static_cast<T>(parse_unsigned(dotted(section, key), *v));
      }
      return true;
    }
    return false;
  };

  ExperimentConfig c;
  if (const std::string* v = get("", "problem")) c.problem = *v;
  if (const std::string* v = get("problem", "name")) c.problem = *v;
  if (const std::string* v = get("", "method")) c.method = *v;
  if (const std::string* v = get("method", "name")) c.method = *v;
  require(!c.problem.empty(), "problem.name", "is required");

  number("problem", "lambda", c.params.lambda);
  number("problem", "grid_n", c.params.grid_n);
  number("problem", "nodes", c.params.advection_nodes);
  number("problem", "speed", c.params.speed);
  number("method", "mu", c.params.mu);
  number("method", "courant", c.params.courant);
  require(c.params.grid_n >= 1, "problem.grid_n", "must be >= 1");
  require(c.params.advection_nodes >= 3 && c.params.advection_nodes % 2 == 1, "problem.nodes",
          "must be odd and >= 3");
  require(c.params.speed != 0.0 && std::isfinite(c.params.speed), "problem.speed", "must be nonzero");
  require(c.params.mu > 0.0, "method.mu", "must be > 0");
  require(c.params.courant > 0.0, "method.courant", "must be > 0");

  const ProblemCatalog catalog = list_catalog(c.params);
  const CatalogEntry* entry = catalog.find(c.problem);
  if (entry == nullptr) {
    std::string names;
    for (const std::string& n : catalog.names()) names += (names.empty() ? "" : ", ") + n;
    throw ConfigValidationError("problem.name",
                                "unknown problem '" + c.problem + "'; the catalog has: " + names);
  }
  if (c.method.empty()) c.method = entry->methods.front();

  c.horizon = entry->horizon;
  c.dt0 = entry->dt0;
  c.cloud = entry->default_cloud;
  c.cap = entry->cap;
  c.rho_local = entry->rho_local;
  c.rho0 = entry->rho0;

  number("problem", "T", c.horizon);
  if (const std::string* v = get("sampling", "norm")) {
    try {
      c.norm = parse_norm_kind(*v);
    } catch (const ContractViolation& e) {
      throw ConfigValidationError("sampling.norm", e.what());
    }
  }
  if (const std::string* v = get("sampling", "cloud")) {
    try {
      c.cloud.generator = parse_cloud_generator(*v);
    } catch (const ContractViolation& e) {
      throw ConfigValidationError("sampling.cloud", e.what());
    }
  }
  c.cloud.dim = entry->problem.dim;
  number("sampling", "lower", c.cloud.lower);
  number("sampling", "upper", c.cloud.upper);
  number("sampling", "count", c.cloud.count);
  number("sampling", "radius", c.cloud.radius);
  number("sampling", "seed", c.seed);
  c.cloud.seed = c.seed;
  c.cloud.ball_norm = effective_norm(entry->problem.norm, c.norm);
  if (const std::string* v = get("sampling", "points")) {
    c.cloud.points = parse_points("sampling.points", *v);
    if (!get("sampling", "cloud")) c.cloud.generator = CloudGenerator::explicit_list;
  }
  if (c.cloud.generator != CloudGenerator::explicit_list) c.cloud.points.clear();
  number("sampling", "cap", c.cap.base);
  number("sampling", "cap_slope", c.cap.slope);
  number("sampling", "t_count", c.t_count);

  number("ladders", "dt0", c.dt0);
  number("ladders", "depth", c.depth);
  number("ladders", "rho_local", c.rho_local);
  number("ladders", "rho0", c.rho0);
  number("ladders", "rho_depth", c.rho_depth);
  number("ladders", "theta_factor", c.theta_factor);

  number("tolerances", "consistency_tol", c.tol.consistency_tol);
  number("tolerances", "convergence_tol", c.tol.convergence_tol);
  number("tolerances", "growth_tol", c.tol.growth_tol);
  number("tolerances", "gap_tau", c.tol.gap_tau);
  number("tolerances", "q_min", c.tol.q_min);
  number("tolerances", "fit_residual_max", c.tol.fit_residual_max);
  number("tolerances", "slack", c.tol.slack);
  number("tolerances", "zero_tol", c.tol.zero_tol);
  number("tolerances", "divergence_factor", c.tol.divergence_factor);
  number("tolerances", "min_pairs", c.tol.min_pairs);

  if (const std::string* v = get("output", "dir")) c.out_dir = *v;
  if (const std::string* v = get("output", "format")) c.format = *v;

  validate_config(c);
  return c;
}

void validate_config(const ExperimentConfig& c) {
  const ProblemCatalog catalog = list_catalog(c.params);
  const CatalogEntry* entry = catalog.find(c.problem);
  if (entry == nullptr) {
    std::string names;
    for (const std::string& n : catalog.names()) names += (names.empty() ? "" : ", ") + n;
    throw ConfigValidationError("problem.name",
                                "unknown problem '" + c.problem + "'; the catalog has: " + names);
  }
  bool method_ok = false;
  for (const std::string& m : entry->methods) method_ok = method_ok || m == c.method;
  if (!method_ok) {
    std::string names;
    for (const std::string& n : entry->methods) names += (names.empty() ? "" : ", ") + n;
    throw ConfigValidationError("method.name", "method '" + c.method + "' is not available for " +
                                                   c.problem + "; choose one of: " + names);
  }
  require(c.horizon > 0.0 && std::isfinite(c.horizon), "problem.T", "must be > 0");
  require(c.dt0 > 0.0 && std::isfinite(c.dt0), "ladders.dt0", "must be > 0");
  require(c.depth <= 30, "ladders.depth", "must be <= 30");
  require(c.rho_local > 0.0, "ladders.rho_local", "must be > 0");
  require(c.rho0 > 0.0, "ladders.rho0", "must be > 0");
  require(c.rho_depth <= 30, "ladders.rho_depth", "must be <= 30");
  require(c.theta_factor >= 0.0, "ladders.theta_factor", "must be >= 0");
  require(c.t_count >= 1, "sampling.t_count", "must be >= 1");
  require(c.cap.base > 0.0, "sampling.cap", "must be > 0");
  require(std::isfinite(c.cap.slope), "sampling.cap_slope", "must be finite");
  switch (c.cloud.generator) {
    case CloudGenerator::grid_in_box:
      require(c.cloud.count >= 1, "sampling.count", "must be >= 1");
      require(c.cloud.lower <= c.cloud.upper, "sampling.upper", "must be >= sampling.lower");
      require(std::pow(static_cast<double>(c.cloud.count), static_cast<double>(c.cloud.dim)) <= 1e6,
              "sampling.count", "gives more than 1e6 grid points in this dimension");
      break;
    case CloudGenerator::ball:
      require(c.cloud.count >= 1, "sampling.count", "must be >= 1");
      require(c.cloud.radius > 0.0, "sampling.radius", "must be > 0");
      break;
    case CloudGenerator::explicit_list:
      require(!c.cloud.points.empty(), "sampling.points", "must list at least one point");
      for (const State& p : c.cloud.points) {
        require(p.dim() == c.cloud.dim, "sampling.points",
                "must have " + std::to_string(c.cloud.dim) + " coordinates per point");
      }
      break;
  }
  const Tolerances& t = c.tol;
  require(t.consistency_tol > 0.0, "tolerances.consistency_tol", "must be > 0");
  require(t.convergence_tol > 0.0, "tolerances.convergence_tol", "must be > 0");
  require(t.growth_tol > 0.0, "tolerances.growth_tol", "must be > 0");
  require(t.gap_tau > 0.0, "tolerances.gap_tau", "must be > 0");
  require(t.q_min > 0.0, "tolerances.q_min", "must be > 0");
  require(t.fit_residual_max > 0.0, "tolerances.fit_residual_max", "must be > 0");
  require(t.slack >= 1.0, "tolerances.slack", "must be >= 1");
  require(t.zero_tol >= 0.0, "tolerances.zero_tol", "must be >= 0");
  require(t.divergence_factor > 0.0, "tolerances.divergence_factor", "must be > 0");
  require(t.min_pairs >= 1, "tolerances.min_pairs", "must be >= 1");
  require(c.format == "json" || c.format == "csv-bundle", "output.format",
          "must be json or csv-bundle");
  require(c.workers >= 1, "workers", "must be >= 1");
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigFileError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

EstimatorSetup build_setup(const ExperimentConfig& c) {
  validate_config(c);
  const ProblemCatalog catalog = list_catalog(c.params);
  const CatalogEntry& entry = *catalog.find(c.problem);
  EstimatorSetup setup;
  setup.problem = entry.problem;
  setup.problem.norm = effective_norm(entry.problem.norm, c.norm);
  setup.method = make_method(entry, c.method, c.params);
  setup.guard = c.cap.unbounded() && c.cap.slope == 0.0
                    ? whole_domain(setup.problem.domain)
                    : sublevel_family(setup.problem.domain, setup.problem.norm, c.cap);
  setup.problem.regular = setup.guard;
  setup.horizon = c.horizon;
  try {
    setup.cloud = CompactCloud(c.cloud);
  } catch (const ContractViolation& e) {
    throw ConfigValidationError("sampling.cloud", e.what());
  }
  setup.dt_ladder = geometric_ladder(c.dt0, c.depth);
  setup.t_grid = uniform_grid(c.horizon, c.t_count);
  setup.workers = c.workers;
  return setup;
}

AnalysisOptions analysis_options(const ExperimentConfig& c) {
  AnalysisOptions o;
  o.rho_local = c.rho_local;
  o.rho0 = c.rho0;
  o.rho_depth = c.rho_depth;
  o.theta_factor = c.theta_factor;
  o.tol = c.tol;
  return o;
}

}  // namespace semigap
