// Instance builders and independent reference computations shared by the test suites.
#pragma once

#include <random>

#include "singell/energy.hpp"
#include "singell/oracle.hpp"

namespace testing {

using namespace singell;

struct Problem {
  OperatorsPtr<double> ops;
  Eigenpair eig;
  double lambda_star;
  EnergyContext family;
};

inline Problem make_problem(double gamma, Weight weight, Nonlinearity f, int n = 256,
                            Domain domain = Domain::interval(0, 1)) {
  auto ops = assemble_operators(build_grid(domain, n));
  Eigenpair eig = principal_eigenpair(*ops);
  const double ls = lambda_star(eig.delta1, f.theta());
  EnergyContext family(ops, SingularExponent(gamma), std::move(weight), std::move(f), 0.0);
  return Problem{ops, std::move(eig), ls, std::move(family)};
}

inline Problem sublinear(int n = 256) { return make_problem(0.5, Weight::constant(1), Nonlinearity::linear(), n); }
inline Problem strong(int n = 256) { return make_problem(1.5, Weight::dist_pow(0.8), Nonlinearity::linear(), n); }

/// Positive random function phi1 (lo + (hi - lo) U(0,1)).
inline GridFunction random_positive(const Eigenpair& eig, std::mt19937_64& rng, double lo = 0.5, double hi = 1.5) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(eig.phi1.size());
  for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = eig.phi1[k] * u(rng);
  return GridFunction(eig.phi1.grid_ptr(), std::move(v));
}

/// Central finite differences of energy_reg, one coordinate at a time. The two
/// increments are taken relative to u so that the O(1) energy cancels exactly.
inline Vector fd_gradient(const EnergyContext& ctx, const GridFunction& u, double eps) {
  Vector g(u.size());
  Vector d = Vector::Zero(u.size());
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    const double h = 1e-6 * std::max(1e-3, std::abs(u[k]));
    d[k] = h;
    const double up = oracle::energy_increment(ctx, u.values(), d, eps);
    d[k] = -h;
    const double dn = oracle::energy_increment(ctx, u.values(), d, eps);
    d[k] = 0.0;
    g[k] = (up - dn) / (2 * h);
  }
  return g;
}

inline double sup_diff(const GridFunction& a, const GridFunction& b) {
  return (a.values() - b.values()).cwiseAbs().maxCoeff();
}

}  // namespace testing
