// Run configuration shared by the command-line flags and key: value config files.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "singell/solver.hpp"
#include "singell/sweep.hpp"

namespace singell {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string domain = "interval:0:1";
  int n = 256;
  double gamma = 0.5;
  std::string weight = "constant:1";
  std::string f = "linear";
  std::optional<double> lambda_frac;
  std::optional<double> lambda;
  bool allow_super = false;
  int points = 40;
  double frac_min = 0.0;
  double frac_max = 0.999;
  double eigen_tol = 1e-12;
  SolverPolicy policy;
  std::string output;
  std::string dump;
  bool parallel = false;
};

/// Keys accepted both as `--key value` flags and as `key: value` config lines.
const std::vector<std::string>& config_keys();

/// Parses and stores one setting; throws ConfigError naming the key on bad input.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);

/// Reads `key: value` lines ('#' starts a comment). Errors carry origin:line.
void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& origin = "<config>");
void apply_config_file(RunConfig& cfg, const std::string& path);

/// Emits every setting as `key: value` lines that re-parse to the same run.
std::string print_config(const RunConfig& cfg);

Domain parse_domain(const std::string& desc);
Nonlinearity parse_nonlinearity(const std::string& desc);
/// `file:` weights are read against `grid`.
Weight parse_weight(const std::string& desc, const GridPtr<double>& grid);

/// Everything derived from a RunConfig that the subcommands need.
struct Instance {
  GridPtr<double> grid;
  OperatorsPtr<double> ops;
  Eigenpair eig;
  double lambda_star;
  /// Energy context at lambda = 0; use with_lambda for other values.
  EnergyContext family;
};

Instance build_instance(const RunConfig& cfg);

/// lambda from --lambda or --lambda-frac; ConfigError if neither or both are set.
double resolve_lambda(const RunConfig& cfg, double lambda_star);

/// Sweep plan from points/frac range; rejects ranges outside [0, 1) of lambda*.
SweepPlan make_sweep_plan(const RunConfig& cfg, double lambda_star);

/// Two columns (x value) in 1D, three (x y value) in 2D, 17 significant digits.
void write_nodal(const GridFunction& u, std::ostream& os);
void write_nodal_file(const GridFunction& u, const std::string& path);

/// Last column of each non-empty line; must supply one value per interior node.
GridFunction read_nodal_file(const std::string& path, const GridPtr<double>& grid);

}  // namespace singell
