#include "singell/verify.hpp"

#include <cstdio>
#include <cstdlib>
#include <random>

#include "singell/oracle.hpp"

namespace singell {

namespace {

std::string fmt(const char* pattern, double a, double b) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

// Same instance on a grid small enough for the brute-force oracle.
std::optional<EnergyContext> coarse_copy(const EnergyContext& family) {
  if (std::holds_alternative<Weight::Nodal>(family.weight().kind)) return std::nullopt;
  const Grid& g = family.grid();
  const int n = g.dim() == 1 ? 65 : 13;
  auto ops = assemble_operators(build_grid(g.domain(), n));
  return EnergyContext(ops, family.gamma(), family.weight(), family.f(), 0.0);
}

}  // namespace

std::uint64_t verify_seed() {
  const char* env = std::getenv("SING_ELLIPTIC_SEED");
  if (env == nullptr || *env == '\0') return kDefaultSeed;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') throw std::invalid_argument(std::string("SING_ELLIPTIC_SEED is not an integer: ") + env);
  return v;
}

CheckResult check_oracle_equivalence(const EnergyContext& ctx, const SolverPolicy& policy, double sup_tol,
                                     double energy_tol) {
  CheckResult res{"oracle equivalence", false, ""};
  const SolveOutcome out = solve_at(ctx, policy);
  if (!out.converged()) {
    res.detail = "solver did not converge: " + out.message;
    return res;
  }
  const double eps = policy.eps_schedule.back();
  const GridFunction ref = oracle::brute_force_minimize(ctx, eps);
  const double sup = (out.u->values() - ref.values()).cwiseAbs().maxCoeff();
  const double de = std::abs(energy_reg(ctx, *out.u, eps) - energy_reg(ctx, ref, eps));
  res.passed = sup <= sup_tol && de <= energy_tol;
  res.detail = fmt("sup|u - u_ref| = %.3e, |dI| = %.3e", sup, de);
  return res;
}

CheckResult check_t_star(const EnergyContext& ctx, const Eigenpair& eig, std::uint64_t seed, int samples,
                         double rel_tol) {
  CheckResult res{"closed-form t*", true, ""};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst_t = 0.0, worst_j = 0.0;
  const bool expect_negative = ctx.gamma().gamma < 1.0;
  for (int s = 0; s < samples; ++s) {
    Vector v(eig.phi1.size());
    for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = eig.phi1[k] * (0.5 + unif(rng));
    const GridFunction u(ctx.grid_ptr(), std::move(v));
    const TStar closed = t_star(ctx, u);
    const oracle::PsiMin scan = oracle::scalar_psi_min(ctx, u);
    worst_t = std::max(worst_t, std::abs(closed.t - scan.t) / closed.t);
    worst_j = std::max(worst_j, std::abs(closed.j_min - scan.value) / std::abs(closed.j_min));
    if ((closed.j_min < 0.0) != expect_negative) res.passed = false;
  }
  res.passed = res.passed && worst_t <= rel_tol && worst_j <= rel_tol;
  res.detail = fmt("max rel err t = %.3e, j_min = %.3e", worst_t, worst_j);
  return res;
}

CheckResult check_didlambda(const EnergyContext& family, const SolverPolicy& policy, double lambda_star,
                            const std::vector<double>& fractions, double rel_tol) {
  CheckResult res{"dI/dlambda = -int F", true, ""};
  double worst = 0.0;
  for (double frac : fractions) {
    const DIdLambdaReport rep =
        didlambda_check(family, policy, frac * lambda_star, 1e-3 * lambda_star, lambda_star);
    worst = std::max(worst, rep.rel_err);
    if (!(rep.rhs < 0.0)) res.passed = false;
  }
  res.passed = res.passed && worst <= rel_tol;
  res.detail = fmt("max rel err = %.3e (tol %.0e)", worst, rel_tol);
  return res;
}

CheckResult check_monotonicity(const EnergyContext& family, const SolverPolicy& policy, double lambda_star,
                               int points, double frac_max, double slack) {
  CheckResult res{"branch monotonicity", true, ""};
  SweepPlan plan = SweepPlan::uniform(lambda_star, points, frac_max);
  plan.policy = policy;
  plan.keep_solutions = true;
  const auto recs = run_sweep(family, plan);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (recs[i].status != SolveStatus::Converged) {
      res.passed = false;
      res.detail = "sweep point " + std::to_string(i) + " did not converge";
      return res;
    }
    if (i == 0) continue;
    if (!(recs[i].h1 > recs[i - 1].h1)) res.passed = false;
    const Vector diff = recs[i - 1].solution->values() - recs[i].solution->values();
    worst = std::max(worst, diff.maxCoeff());
  }
  res.passed = res.passed && worst <= slack;
  res.detail = fmt("max(u_lambda - u_mu) = %.3e (slack %.0e)", worst, slack);
  return res;
}

std::vector<CheckResult> run_verify(const EnergyContext& family, const Eigenpair& eig, double lambda_star,
                                    const SolverPolicy& policy, std::uint64_t seed) {
  std::vector<CheckResult> out;
  auto guarded = [&](const std::string& name, auto&& fn) {
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      out.push_back(CheckResult{name, false, std::string("error: ") + e.what()});
    }
  };

  guarded("oracle equivalence", [&] {
    const auto coarse = coarse_copy(family);
    if (!coarse) return CheckResult{"oracle equivalence", true, "skipped: nodal weights are tied to their grid"};
    const Eigenpair ce = principal_eigenpair(coarse->ops());
    const double ls = singell::lambda_star(ce.delta1, coarse->theta());
    return check_oracle_equivalence(coarse->with_lambda(0.5 * ls), policy);
  });
  guarded("closed-form t*", [&] {
    if (family.gamma().gamma == 1.0) return CheckResult{"closed-form t*", true, "skipped: t* needs gamma != 1"};
    return check_t_star(family.with_lambda(0.5 * lambda_star), eig, seed);
  });
  guarded("dI/dlambda = -int F", [&] { return check_didlambda(family, policy, lambda_star); });
  guarded("branch monotonicity", [&] { return check_monotonicity(family, policy, lambda_star); });
  return out;
}

}  // namespace singell
