// Continuation in lambda: branch tracing, the dI/dlambda identity and CSV output.
#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "singell/solver.hpp"

namespace singell {

struct SweepPlan {
  std::vector<double> lambda_grid;
  SolverPolicy policy;
  double dlambda_fd = 0.0;
  /// Solve every lambda from a cold start on worker threads.
  bool parallel = false;
  /// Store the solution vector in each record.
  bool keep_solutions = false;

  /// `points` uniform values on [frac_min, frac_max] * lambda_star; dlambda_fd = 1e-3 lambda_star.
  static SweepPlan uniform(double lambda_star, int points = 40, double frac_max = 0.999, double frac_min = 0.0);

  /// Grid strictly increasing, non-negative, and below lambda_star.
  void validate(double lambda_star) const;
};

struct SweepRecord {
  double lambda = 0.0;
  double h1 = 0.0;
  double energy = 0.0;
  double intF = 0.0;
  double nehari = 0.0;
  int iterations = 0;
  SolveStatus status = SolveStatus::Failed;
  std::optional<GridFunction> solution;
};

/// Solves along plan.lambda_grid in ascending order. Sequential mode warm-starts
/// each solve from the previous converged solution and retries once cold on
/// failure; parallel mode solves every point cold. `family` supplies everything
/// but lambda.
std::vector<SweepRecord> run_sweep(const EnergyContext& family, const SweepPlan& plan);

struct DIdLambdaReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_err = 0.0;
};

/// Central difference of lambda -> I(u_lambda) against -int F(u_lambda).
DIdLambdaReport didlambda_check(const EnergyContext& family, const SolverPolicy& policy, double lambda,
                                double dlambda, double lambda_star);

inline constexpr const char* kCsvHeader = "lambda,h1_norm,energy,intF,nehari_residual,iterations,status";

void write_csv(const std::vector<SweepRecord>& records, std::ostream& os);
/// Writes the CSV file; throws std::runtime_error carrying the OS error text.
void emit_csv(const std::vector<SweepRecord>& records, const std::string& path);
std::vector<SweepRecord> parse_csv(std::istream& is);

SolveStatus parse_status(const std::string& s);

}  // namespace singell
