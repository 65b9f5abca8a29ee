#include "singell/solver.hpp"

#include <random>
#include <stdexcept>

#include <Eigen/SparseCholesky>

namespace singell {

namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 60;

SparseMatrix jacobian(const EnergyContext& ctx, const Vector& u, double eps) {
  const Vector& w = ctx.ops().quad;
  const Vector& a = ctx.a();
  const double g = ctx.gamma().gamma;
  Vector diag(u.size());
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    double d = -ctx.lambda() * f_prime(ctx.f(), u[k], eps);
    if (ctx.has_singular_term()) d += g * a[k] * std::pow(u[k] + eps, -g - 1.0);
    diag[k] = w[k] * d;
  }
  SparseMatrix j = ctx.ops().stiffness;
  for (Eigen::Index k = 0; k < u.size(); ++k) j.coeffRef(k, k) += diag[k];
  return j;
}

GridFunction initial_iterate(const EnergyContext& ctx, double eps0,
                             const Eigen::SimplicialLDLT<SparseMatrix>& stiffness_ldlt) {
  const auto& grid = ctx.grid_ptr();
  const Vector d = boundary_distance(grid).values();
  const Vector& w = ctx.ops().quad;
  Vector forcing(d.size());
  for (Eigen::Index k = 0; k < d.size(); ++k) {
    const double a = ctx.has_singular_term() ? ctx.a()[k] : 1.0;
    forcing[k] = w[k] * a * std::pow(d[k] + eps0, -ctx.gamma().gamma);
  }
  Vector u0 = stiffness_ldlt.solve(forcing);
  if (stiffness_ldlt.info() == Eigen::Success && u0.allFinite() && (u0.array() > 0.0).all())
    return GridFunction(grid, std::move(u0));
  const Eigenpair eig = principal_eigenpair(ctx.ops());
  return 0.5 * eig.phi1;
}

struct StageResult {
  bool converged = false;
  bool damping_exhausted = false;
  bool blew_up = false;
  int iterations = 0;
  double scaled_residual = 0.0;
};

class NewtonStage {
 public:
  NewtonStage(const EnergyContext& ctx, const SolverPolicy& policy,
              const Eigen::SimplicialLDLT<SparseMatrix>& stiffness_ldlt)
      : ctx_(ctx), policy_(policy), stiffness_ldlt_(stiffness_ldlt) {
    jac_ldlt_.analyzePattern(ctx.ops().stiffness);
  }

  StageResult run(GridFunction& u, double eps) {
    StageResult res;
    const SparseMatrix& a = ctx_.ops().stiffness;
    for (;;) {
      const GridFunction r = residual_reg(ctx_, u, eps);
      const double au_norm = (a * u.values()).norm();
      const double rnorm = r.values().norm();
      res.scaled_residual = au_norm > 0.0 ? rnorm / au_norm : rnorm;
      if (res.scaled_residual <= policy_.tol_residual) {
        res.converged = true;
        return res;
      }
      if (res.iterations >= policy_.max_newton) return res;

      Vector p = newton_direction(u.values(), r.values(), eps);
      const double slope = r.values().dot(p);

      double s = 1.0;
      for (Eigen::Index k = 0; k < p.size(); ++k)
        if (p[k] < 0.0) s = std::min(s, policy_.damping * u[k] / -p[k]);

      const double e0 = energy_reg(ctx_, u, eps);
      const double noise = 1e-12 * (std::abs(e0) + u.values().dot(a * u.values()));
      bool accepted = false;
      for (int halving = 0; halving <= kMaxHalvings; ++halving, s *= 0.5) {
        GridFunction trial(u.grid_ptr(), u.values() + s * p);
        const double e1 = energy_reg(ctx_, trial, eps);
        if (outside_domain(e1) || !std::isfinite(e1)) continue;
        bool ok = e1 <= e0 + kArmijo * s * slope;
        if (!ok && e1 <= e0 + noise) ok = residual_reg(ctx_, trial, eps).values().norm() < rnorm;
        if (ok) {
          u = std::move(trial);
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        res.damping_exhausted = true;
        return res;
      }
      ++res.iterations;
      if (h1_norm(ctx_.ops(), u) > policy_.norm_cap) {
        res.blew_up = true;
        return res;
      }
    }
  }

 private:
  Vector newton_direction(const Vector& u, const Vector& r, double eps) {
    const SparseMatrix j = jacobian(ctx_, u, eps);
    jac_ldlt_.factorize(j);
    if (jac_ldlt_.info() == Eigen::Success) {
      Vector p = -jac_ldlt_.solve(r);
      if (jac_ldlt_.info() == Eigen::Success && p.allFinite() && r.dot(p) < 0.0) return p;
    }
    return -stiffness_ldlt_.solve(r);
  }

  const EnergyContext& ctx_;
  const SolverPolicy& policy_;
  const Eigen::SimplicialLDLT<SparseMatrix>& stiffness_ldlt_;
  Eigen::SimplicialLDLT<SparseMatrix> jac_ldlt_;
};

void fill_diagnostics(const EnergyContext& ctx, const GridFunction& u, Diagnostics& diag) {
  diag.h1 = h1_norm(ctx.ops(), u);
  diag.energy = energy_value(ctx, u);
  diag.min_u_over_d = min_ratio_to_distance(u);
  if ((u.values().array() > 0.0).all()) diag.nehari = nehari_residual(ctx, u);
}

}  // namespace

void SolverPolicy::validate() const {
  if (eps_schedule.empty()) throw std::invalid_argument("eps schedule must not be empty");
  for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
    if (!(eps_schedule[i] > 0.0)) throw std::invalid_argument("eps schedule entries must be positive");
    if (i > 0 && !(eps_schedule[i] < eps_schedule[i - 1]))
      throw std::invalid_argument("eps schedule must be strictly decreasing");
  }
  if (!(tol_residual > 0.0)) throw std::invalid_argument("tol_residual must be positive");
  if (max_newton < 1) throw std::invalid_argument("max_newton must be >= 1");
  if (!(norm_cap > 0.0)) throw std::invalid_argument("norm_cap must be positive");
  if (!(damping > 0.0 && damping < 1.0)) throw std::invalid_argument("damping must lie in (0, 1)");
  if (!(stage_tol > 0.0)) throw std::invalid_argument("stage_tol must be positive");
}

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged:
      return "converged";
    case SolveStatus::NoSolutionDetected:
      return "no_solution";
    case SolveStatus::Failed:
      return "failed";
  }
  return "failed";
}

double min_ratio_to_distance(const GridFunction& u) {
  const Vector d = boundary_distance(u.grid_ptr()).values();
  return u.values().cwiseQuotient(d).minCoeff();
}

SolveOutcome solve_at(const EnergyContext& ctx, const SolverPolicy& policy, const std::optional<GridFunction>& warm) {
  policy.validate();
  SolveOutcome out;
  Eigen::SimplicialLDLT<SparseMatrix> stiffness_ldlt(ctx.ops().stiffness);
  if (stiffness_ldlt.info() != Eigen::Success) {
    out.message = "stiffness factorization failed";
    return out;
  }

  GridFunction u = [&] {
    if (warm) {
      warm->require_grid(ctx.grid());
      if (!(warm->values().array() > 0.0).all()) throw std::invalid_argument("warm start must be positive");
      return GridFunction(ctx.grid_ptr(), warm->values());
    }
    return initial_iterate(ctx, policy.eps_schedule.front(), stiffness_ldlt);
  }();

  NewtonStage newton(ctx, policy, stiffness_ldlt);
  std::vector<StageResult> stages;
  std::optional<Vector> previous;
  double stage_change = std::numeric_limits<double>::infinity();
  for (double eps : policy.eps_schedule) {
    const StageResult st = newton.run(u, eps);
    stages.push_back(st);
    out.diagnostics.iterations += st.iterations;
    out.diagnostics.stage_norms.push_back(h1_norm(ctx.ops(), u));
    out.diagnostics.scaled_residual = st.scaled_residual;
    out.diagnostics.final_eps = eps;
    if (previous) stage_change = (u.values() - *previous).cwiseAbs().maxCoeff();
    previous = u.values();
    if (st.blew_up) {
      out.status = SolveStatus::NoSolutionDetected;
      char buf[160];
      std::snprintf(buf, sizeof buf, "H1 norm exceeded cap %.3g at eps = %.3g", policy.norm_cap, eps);
      out.message = buf;
      fill_diagnostics(ctx, u, out.diagnostics);
      out.u = std::move(u);
      return out;
    }
  }

  fill_diagnostics(ctx, u, out.diagnostics);
  const StageResult& last = stages.back();
  const bool settled = stages.size() == 1 || stage_change < policy.stage_tol;
  if (last.converged && settled) {
    out.status = SolveStatus::Converged;
  } else if (stages.size() >= 2 && !last.converged && !stages[stages.size() - 2].converged) {
    const auto& norms = out.diagnostics.stage_norms;
    const std::size_t k = norms.size();
    const bool growing = k >= 3 ? norms[k - 1] > norms[k - 2] && norms[k - 2] > norms[k - 3] : norms[k - 1] > norms[k - 2];
    if (growing) {
      out.status = SolveStatus::NoSolutionDetected;
      out.message = "final two eps stages did not converge and the norm kept growing";
    } else {
      out.message = "Newton budget exhausted at the final eps stages";
    }
  } else if (!last.converged) {
    out.message = last.damping_exhausted ? "line search exhausted at the final eps stage"
                                         : "Newton budget exhausted at the final eps stage";
  } else {
    char buf[160];
    std::snprintf(buf, sizeof buf, "eps continuation did not settle (last stage change %.3g)", stage_change);
    out.message = buf;
  }
  out.u = std::move(u);
  return out;
}

SolutionReport check_solution(const EnergyContext& ctx, const GridFunction& u, std::uint64_t seed, int tests,
                              double weak_tol, double nehari_tol) {
  require_on(ctx.ops(), u);
  if (!(u.values().array() > 0.0).all()) throw std::domain_error("check_solution requires nodal u > 0");
  SolutionReport rep;
  const GridFunction r = euler_lagrange_residual(ctx, u, 0.0);
  const Vector au = ctx.ops().stiffness * u.values();
  rep.residual_norm = r.values().norm();
  rep.scaled_residual = rep.residual_norm / au.norm();
  rep.nehari = nehari_residual(ctx, u);
  rep.energy = energy_value(ctx, u);
  const double norm2 = h1_norm_squared(ctx.ops(), u);
  rep.nehari_ok = std::abs(rep.nehari) <= nehari_tol * norm2;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  rep.weak_defect = 0.0;
  for (int t = 0; t < tests; ++t) {
    Vector phi(u.size());
    for (Eigen::Index k = 0; k < phi.size(); ++k) phi[k] = unit(rng);
    // Each term of the pairing u^T A phi = int a u^-g phi + lambda int f(u) phi is
    // bounded by the sum of absolute values; use it as the scale.
    const double lhs = au.dot(phi);
    const double defect = r.values().dot(phi);
    const double scale = std::abs(lhs) + std::abs(defect - lhs);
    rep.weak_defect = std::max(rep.weak_defect, std::abs(defect) / scale);
  }
  rep.weak_ok = rep.weak_defect <= weak_tol;
  return rep;
}

}  // namespace singell
