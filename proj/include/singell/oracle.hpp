// Brute-force references: gradient-descent energy minimization on small grids
// and scalar minimization of psi(t) = J(t u). Shares no code with the Newton solver.
#pragma once

#include <vector>

#include "singell/energy.hpp"

namespace singell::oracle {

struct OracleConfig {
  long max_iters = 2'000'000;
  double step0 = 1e-2;
  /// Stop once |grad| <= tol * max(1, |A u|).
  double tol = 1e-12;
};

inline constexpr Eigen::Index kMaxNodes = 200;

struct DescentRun {
  GridFunction u;
  double energy;
  long iterations;
};

/// Gradient of energy_reg assembled from the finite-difference stencil directly
/// (does not touch the assembled stiffness matrix).
Vector stencil_gradient(const EnergyContext& ctx, const Vector& u, double eps);

/// energy_reg(u + d) - energy_reg(u), evaluated term by term without cancellation.
double energy_increment(const EnergyContext& ctx, const Vector& u, const Vector& d, double eps);

/// Runs descent from the three standard starts (0.5 phi1, d(x), constant 0.1).
std::vector<DescentRun> descent_runs(const EnergyContext& ctx, double eps, const OracleConfig& config = {});

/// Lowest-energy endpoint of descent_runs.
GridFunction brute_force_minimize(const EnergyContext& ctx, double eps, const OracleConfig& config = {});

struct PsiMin {
  double t;
  double value;
};

/// Log-grid scan of psi(t) = J(t u) on [1e-6, 1e3] followed by golden-section refinement.
PsiMin scalar_psi_min(const EnergyContext& ctx, const GridFunction& u);

}  // namespace singell::oracle
