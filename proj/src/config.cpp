#include "singell/config.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>

namespace singell {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream ss(s);
  while (std::getline(ss, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double to_real(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  char* end = nullptr;
  errno = 0;
  const double x = std::strtod(t.c_str(), &end);
  if (t.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(x))
    throw ConfigError(key + ": expected a finite number, got '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  char* end = nullptr;
  errno = 0;
  const long x = std::strtol(t.c_str(), &end, 10);
  if (t.empty() || *end != '\0' || errno == ERANGE || x < INT32_MIN || x > INT32_MAX)
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return int(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

std::string real_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "domain",   "n",          "gamma",     "weight",    "f",        "lambda-frac", "lambda",
      "allow-super", "points",  "frac-min",  "frac-max",  "eigen-tol", "eps-schedule", "tol",
      "max-newton", "norm-cap", "damping",   "stage-tol", "output",   "dump",        "parallel"};
  return keys;
}

Domain parse_domain(const std::string& desc) {
  const auto parts = split(desc, ':');
  try {
    if (parts.size() == 3 && parts[0] == "interval")
      return Domain::interval(to_real("domain", parts[1]), to_real("domain", parts[2]));
    if (parts.size() == 3 && parts[0] == "rectangle")
      return Domain::rectangle(to_real("domain", parts[1]), to_real("domain", parts[2]));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("domain: ") + e.what());
  }
  throw ConfigError("domain: expected interval:<lo>:<hi> or rectangle:<lx>:<ly>, got '" + desc + "'");
}

Nonlinearity parse_nonlinearity(const std::string& desc) {
  const auto parts = split(desc, ':');
  try {
    if (parts.size() == 1 && parts[0] == "linear") return Nonlinearity::linear();
    if (parts.size() == 3 && parts[0] == "affine")
      return Nonlinearity::affine(to_real("f", parts[1]), to_real("f", parts[2]));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("f: ") + e.what());
  }
  throw ConfigError("f: expected linear or affine:<a>:<r>, got '" + desc + "'");
}

Weight parse_weight(const std::string& desc, const GridPtr<double>& grid) {
  const auto colon = desc.find(':');
  const std::string kind = desc.substr(0, colon);
  try {
    if (kind == "file" && colon != std::string::npos) {
      if (!grid) throw ConfigError("weight: file weights need a grid");
      return Weight::nodal(read_nodal_file(desc.substr(colon + 1), grid));
    }
    const auto parts = split(desc, ':');
    if (parts.size() == 2 && parts[0] == "constant") return Weight::constant(to_real("weight", parts[1]));
    if (parts.size() == 2 && parts[0] == "distpow") return Weight::dist_pow(to_real("weight", parts[1]));
    if (parts.size() == 3 && parts[0] == "distpow")
      return Weight::dist_pow(to_real("weight", parts[1]), to_real("weight", parts[2]));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("weight: ") + e.what());
  } catch (const std::runtime_error& e) {
    if (dynamic_cast<const ConfigError*>(&e)) throw;
    throw ConfigError(std::string("weight: ") + e.what());
  }
  throw ConfigError("weight: expected constant:<c>, distpow:<eta>[:<scale>] or file:<path>, got '" + desc + "'");
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (key == "domain") {
    parse_domain(v);
    cfg.domain = v;
  } else if (key == "n") {
    const int n = to_int(key, v);
    if (n < 3) throw ConfigError("n: need at least 3 interior nodes per axis");
    cfg.n = n;
  } else if (key == "gamma") {
    const double gamma = to_real(key, v);
    if (!(gamma > 0.0)) throw ConfigError("gamma: must be positive");
    cfg.gamma = gamma;
  } else if (key == "weight") {
    if (v.rfind("file:", 0) != 0) parse_weight(v, nullptr);
    cfg.weight = v;
  } else if (key == "f") {
    parse_nonlinearity(v);
    cfg.f = v;
  } else if (key == "lambda-frac") {
    const double frac = to_real(key, v);
    if (frac < 0.0) throw ConfigError("lambda-frac: must be >= 0");
    cfg.lambda_frac = frac;
  } else if (key == "lambda") {
    const double lambda = to_real(key, v);
    if (lambda < 0.0) throw ConfigError("lambda: must be >= 0");
    cfg.lambda = lambda;
  } else if (key == "allow-super") {
    cfg.allow_super = to_bool(key, v);
  } else if (key == "points") {
    const int points = to_int(key, v);
    if (points < 0) throw ConfigError("points: must be >= 0");
    cfg.points = points;
  } else if (key == "frac-min") {
    cfg.frac_min = to_real(key, v);
  } else if (key == "frac-max") {
    cfg.frac_max = to_real(key, v);
  } else if (key == "eigen-tol") {
    const double tol = to_real(key, v);
    if (!(tol > 0.0)) throw ConfigError("eigen-tol: must be positive");
    cfg.eigen_tol = tol;
  } else if (key == "eps-schedule") {
    std::vector<double> eps;
    for (const auto& part : split(v, ',')) eps.push_back(to_real(key, part));
    SolverPolicy p = cfg.policy;
    p.eps_schedule = eps;
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("eps-schedule: ") + e.what());
    }
    cfg.policy.eps_schedule = std::move(eps);
  } else if (key == "tol" || key == "max-newton" || key == "norm-cap" || key == "damping" || key == "stage-tol") {
    SolverPolicy p = cfg.policy;
    if (key == "tol") p.tol_residual = to_real(key, v);
    if (key == "max-newton") p.max_newton = to_int(key, v);
    if (key == "norm-cap") p.norm_cap = to_real(key, v);
    if (key == "damping") p.damping = to_real(key, v);
    if (key == "stage-tol") p.stage_tol = to_real(key, v);
    try {
      p.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(key + ": " + e.what());
    }
    cfg.policy = std::move(p);
  } else if (key == "output") {
    cfg.output = v;
  } else if (key == "dump") {
    cfg.dump = v;
  } else if (key == "parallel") {
    cfg.parallel = to_bool(key, v);
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& origin) {
  std::stringstream ss(text);
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected 'key: value'");
    const std::string key = trim(line.substr(0, colon));
    try {
      apply_setting(cfg, key, line.substr(colon + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError(path + ": " + std::strerror(errno));
  std::stringstream buf;
  buf << is.rdbuf();
  apply_config_text(cfg, buf.str(), path);
}

std::string print_config(const RunConfig& cfg) {
  std::ostringstream os;
  os << "domain: " << cfg.domain << '\n';
  os << "n: " << cfg.n << '\n';
  os << "gamma: " << real_text(cfg.gamma) << '\n';
  os << "weight: " << cfg.weight << '\n';
  os << "f: " << cfg.f << '\n';
  if (cfg.lambda_frac) os << "lambda-frac: " << real_text(*cfg.lambda_frac) << '\n';
  if (cfg.lambda) os << "lambda: " << real_text(*cfg.lambda) << '\n';
  os << "allow-super: " << (cfg.allow_super ? "true" : "false") << '\n';
  os << "points: " << cfg.points << '\n';
  os << "frac-min: " << real_text(cfg.frac_min) << '\n';
  os << "frac-max: " << real_text(cfg.frac_max) << '\n';
  os << "eigen-tol: " << real_text(cfg.eigen_tol) << '\n';
  os << "eps-schedule: ";
  for (std::size_t i = 0; i < cfg.policy.eps_schedule.size(); ++i)
    os << (i ? "," : "") << real_text(cfg.policy.eps_schedule[i]);
  os << '\n';
  os << "tol: " << real_text(cfg.policy.tol_residual) << '\n';
  os << "max-newton: " << cfg.policy.max_newton << '\n';
  os << "norm-cap: " << real_text(cfg.policy.norm_cap) << '\n';
  os << "damping: " << real_text(cfg.policy.damping) << '\n';
  os << "stage-tol: " << real_text(cfg.policy.stage_tol) << '\n';
  if (!cfg.output.empty()) os << "output: " << cfg.output << '\n';
  if (!cfg.dump.empty()) os << "dump: " << cfg.dump << '\n';
  os << "parallel: " << (cfg.parallel ? "true" : "false") << '\n';
  return os.str();
}

Instance build_instance(const RunConfig& cfg) {
  const Domain domain = parse_domain(cfg.domain);
  GridPtr<double> grid;
  try {
    grid = build_grid(domain, cfg.n);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("n: ") + e.what());
  }
  auto ops = assemble_operators(grid);
  Eigenpair eig = principal_eigenpair(*ops, cfg.eigen_tol);
  const Nonlinearity f = parse_nonlinearity(cfg.f);
  const SingularExponent gamma(cfg.gamma);
  Weight weight = parse_weight(cfg.weight, grid);
  if (!weight_admissible(weight, gamma, eig.phi1, ops->quad))
    throw ConfigError("weight: " + cfg.weight + " is not admissible for gamma = " + real_text(cfg.gamma));
  const double ls = lambda_star(eig.delta1, f.theta());
  EnergyContext family(ops, gamma, std::move(weight), f, 0.0);
  return Instance{grid, ops, std::move(eig), ls, std::move(family)};
}

double resolve_lambda(const RunConfig& cfg, double lambda_star) {
  if (cfg.lambda && cfg.lambda_frac) throw ConfigError("lambda: give either --lambda or --lambda-frac, not both");
  if (!cfg.lambda && !cfg.lambda_frac) throw ConfigError("lambda: one of --lambda or --lambda-frac is required");
  const double lambda = cfg.lambda ? *cfg.lambda : *cfg.lambda_frac * lambda_star;
  if (lambda >= lambda_star && !cfg.allow_super)
    throw ConfigError("lambda: value " + real_text(lambda) + " is not below lambda* = " + real_text(lambda_star) +
                      " (pass --allow-super to probe)");
  return lambda;
}

SweepPlan make_sweep_plan(const RunConfig& cfg, double lambda_star) {
  if (!(cfg.frac_min >= 0.0) || !(cfg.frac_max < 1.0) || !(cfg.frac_min <= cfg.frac_max))
    throw ConfigError("sweep range must satisfy 0 <= frac-min <= frac-max < 1 (fractions of lambda*)");
  if (cfg.points > 1 && !(cfg.frac_min < cfg.frac_max))
    throw ConfigError("sweep range is empty for more than one point");
  SweepPlan plan = SweepPlan::uniform(lambda_star, cfg.points, cfg.frac_max, cfg.frac_min);
  plan.policy = cfg.policy;
  plan.parallel = cfg.parallel;
  return plan;
}

void write_nodal(const GridFunction& u, std::ostream& os) {
  const Grid& grid = u.grid();
  char buf[128];
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    const auto [x, y] = grid.coord(k);
    if (grid.dim() == 1)
      std::snprintf(buf, sizeof buf, "%.17g %.17g\n", x, u[k]);
    else
      std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", x, y, u[k]);
    os << buf;
  }
}

void write_nodal_file(const GridFunction& u, const std::string& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error(path + ": " + std::strerror(errno));
  write_nodal(u, os);
  if (!os) throw std::runtime_error(path + ": " + std::strerror(errno));
}

GridFunction read_nodal_file(const std::string& path, const GridPtr<double>& grid) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error(path + ": " + std::strerror(errno));
  Vector values(grid->size());
  Eigen::Index k = 0;
  std::string line;
  while (std::getline(is, line)) {
    std::stringstream ss(line);
    std::string tok, last;
    while (ss >> tok) last = tok;
    if (last.empty() || last[0] == '#') continue;
    if (k >= values.size()) throw std::runtime_error(path + ": more values than interior nodes");
    char* end = nullptr;
    values[k++] = std::strtod(last.c_str(), &end);
    if (*end != '\0') throw std::runtime_error(path + ": malformed value '" + last + "'");
  }
  if (k != values.size())
    throw std::runtime_error(path + ": expected " + std::to_string(values.size()) + " values, found " +
                             std::to_string(k));
  return GridFunction(grid, std::move(values));
}

}  // namespace singell
