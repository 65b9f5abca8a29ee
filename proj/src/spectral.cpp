#include "singell/spectral.hpp"

#include <Eigen/SparseCholesky>

namespace singell {

double rayleigh_quotient(const Operators& ops, const GridFunction& u) {
  const double mass = ops.quad.dot(u.values().cwiseAbs2());
  if (!(mass > 0.0)) throw std::invalid_argument("Rayleigh quotient of the zero function");
  return h1_norm_squared(ops, u) / mass;
}

Eigenpair principal_eigenpair(const Operators& ops, double tol, int max_iters) {
  if (!(tol > 0.0)) throw std::invalid_argument("eigen tolerance must be positive");
  Eigen::SimplicialLDLT<SparseMatrix> ldlt(ops.stiffness);
  if (ldlt.info() != Eigen::Success) throw std::runtime_error("stiffness factorization failed");

  const Vector& w = ops.quad;
  Vector v = Vector::Ones(w.size());
  double delta = v.dot(ops.stiffness * v) / w.dot(v.cwiseAbs2());
  // The quotient converges twice as fast as the vector; gate on both.
  const double vec_tol = 1e-3 * std::sqrt(tol);
  for (int it = 1; it <= max_iters; ++it) {
    Vector next = ldlt.solve(w.cwiseProduct(v));
    next /= next.cwiseAbs().maxCoeff();
    const double rq = next.dot(ops.stiffness * next) / w.dot(next.cwiseAbs2());
    const double change = (next - v / v.cwiseAbs().maxCoeff()).cwiseAbs().maxCoeff();
    v = std::move(next);
    if (std::abs(rq - delta) < tol * std::max(1.0, std::abs(rq)) && change < vec_tol) {
      if (v.sum() < 0.0) v = -v;
      v /= v.maxCoeff();
      return Eigenpair{rq, GridFunction(ops.grid, std::move(v)), it};
    }
    delta = rq;
  }
  throw EigenNotConverged("inverse power iteration did not converge in " + std::to_string(max_iters) + " steps");
}

double lambda_star(double delta1, double theta) {
  if (!(delta1 > 0.0)) throw std::invalid_argument("principal eigenvalue must be positive");
  if (!(theta > 0.0) || !std::isfinite(theta)) throw std::invalid_argument("theta must lie in (0, inf)");
  return delta1 / theta;
}

}  // namespace singell
