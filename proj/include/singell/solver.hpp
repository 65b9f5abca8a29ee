// Minimizer of the discrete energy by epsilon-continuation and damped Newton.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "singell/energy.hpp"

namespace singell {

struct SolverPolicy {
  /// Strictly decreasing regularization levels; the last one is the reported solve.
  std::vector<double> eps_schedule = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8, 1e-9, 1e-10};
  /// Bound on |r| / |A u| at the final eps.
  double tol_residual = 1e-10;
  int max_newton = 200;
  /// H^1_0 norm beyond which the branch is declared unbounded.
  double norm_cap = 1e6;
  /// Fraction-to-boundary factor: steps keep u + s p >= (1 - damping) u.
  double damping = 0.99;
  /// Bound on the sup-norm change between the last two eps stages.
  double stage_tol = 1e-8;

  void validate() const;
};

enum class SolveStatus { Converged, NoSolutionDetected, Failed };

const char* to_string(SolveStatus s);

struct Diagnostics {
  double energy = 0.0;
  double h1 = 0.0;
  double nehari = 0.0;
  int iterations = 0;
  /// min over nodes of u / d(x, boundary).
  double min_u_over_d = 0.0;
  double scaled_residual = 0.0;
  double final_eps = 0.0;
  /// H^1_0 norm at the end of each eps stage.
  std::vector<double> stage_norms;
};

struct SolveOutcome {
  SolveStatus status = SolveStatus::Failed;
  /// Final iterate; present for Converged and for diagnosis of the other outcomes.
  std::optional<GridFunction> u;
  Diagnostics diagnostics;
  /// Failure reason or non-existence evidence.
  std::string message;

  bool converged() const { return status == SolveStatus::Converged; }
};

/// Computes the positive minimizer of the energy of `ctx`.
///
/// For every eps of the schedule, damped Newton runs on residual_reg with the
/// Jacobian A + diag(w (gamma a (u + eps)^{-gamma-1} - lambda f'(u))). Step lengths
/// are first limited by the fraction-to-boundary rule and then by Armijo
/// backtracking on energy_reg; when the Newton system fails or yields a non-descent
/// direction the step falls back to the H^1_0 gradient -A^{-1} r.
///
/// NoSolutionDetected is a heuristic: the H^1_0 norm crossed norm_cap, or the last
/// two stages failed to converge while the norm kept growing. Other non-convergence
/// is reported as Failed.
SolveOutcome solve_at(const EnergyContext& ctx, const SolverPolicy& policy = {},
                      const std::optional<GridFunction>& warm = std::nullopt);

struct SolutionReport {
  /// |r_0| and |r_0| / |A u| with r_0 the unregularized Euler-Lagrange residual.
  double residual_norm = 0.0;
  double scaled_residual = 0.0;
  double nehari = 0.0;
  double energy = 0.0;
  /// Largest relative weak-identity defect over the random test functions.
  double weak_defect = 0.0;
  bool weak_ok = false;
  bool nehari_ok = false;
  bool passed() const { return weak_ok && nehari_ok; }
};

/// Tests u against the weak formulation with `tests` random non-negative test functions.
SolutionReport check_solution(const EnergyContext& ctx, const GridFunction& u, std::uint64_t seed = 20240607,
                              int tests = 10, double weak_tol = 1e-7, double nehari_tol = 1e-8);

/// min_k u_k / d_k.
double min_ratio_to_distance(const GridFunction& u);

}  // namespace singell
