// Principal Dirichlet eigenpair and the critical parameter lambda*.
#pragma once

#include "singell/grid.hpp"

namespace singell {

/// Smallest eigenvalue of A phi = delta M phi (M = diag(w)) and its eigenfunction,
/// positive and scaled so that max phi1 = 1.
///
/// The literature writes this eigenvalue both as delta_1 and lambda_1; here it is
/// always `delta1`.
struct Eigenpair {
  double delta1;
  GridFunction phi1;
  int iterations = 0;
};

class EigenNotConverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inverse power iteration (shift 0, one sparse factorization). Stops when the
/// Rayleigh quotient changes by less than tol * max(1, delta) and the sup-normalized
/// iterate by less than 1e-3 sqrt(tol).
Eigenpair principal_eigenpair(const Operators& ops, double tol = 1e-12, int max_iters = 10000);

/// lambda* = delta1 / theta.
double lambda_star(double delta1, double theta);

/// Discrete Rayleigh quotient u^T A u / (w^T u^2).
double rayleigh_quotient(const Operators& ops, const GridFunction& u);

}  // namespace singell
