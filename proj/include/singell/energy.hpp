// Energy functional I_lambda, its epsilon-regularized gradient, and the
// auxiliary functionals H_lambda, J_lambda with the closed-form scalar minimizer.
#pragma once

#include <limits>

#include "singell/grid.hpp"
#include "singell/model.hpp"
#include "singell/spectral.hpp"

namespace singell {

/// Marker returned by energy evaluations outside the effective domain.
inline constexpr double kOutsideDomain = std::numeric_limits<double>::infinity();

inline bool outside_domain(double e) { return e == kOutsideDomain; }

class EnergyContext {
 public:
  EnergyContext(OperatorsPtr<double> ops, SingularExponent gamma, Weight weight, Nonlinearity f, double lambda);

  /// Testing hook: a == 0, so only the Laplacian and lambda F terms remain.
  static EnergyContext without_singular_term(OperatorsPtr<double> ops, SingularExponent gamma, Nonlinearity f,
                                             double lambda);

  EnergyContext with_lambda(double lambda) const;

  const Operators& ops() const { return *ops_; }
  const OperatorsPtr<double>& ops_ptr() const { return ops_; }
  const GridPtr<double>& grid_ptr() const { return ops_->grid; }
  const Grid& grid() const { return *ops_->grid; }
  SingularExponent gamma() const { return gamma_; }
  const Weight& weight() const { return weight_; }
  /// Nodal weight values a(x_k).
  const Vector& a() const { return a_; }
  const Nonlinearity& f() const { return f_; }
  double lambda() const { return lambda_; }
  double theta() const { return f_.theta(); }
  bool has_singular_term() const { return singular_; }

 private:
  EnergyContext() : gamma_(1.0) {}

  OperatorsPtr<double> ops_;
  SingularExponent gamma_;
  Weight weight_{Weight::Constant{1.0}};
  Vector a_;
  Nonlinearity f_{Nonlinearity::Linear{}};
  double lambda_ = 0.0;
  bool singular_ = true;
};

/// I(u) = 1/2 |u|^2 - lambda int F(u) - int a G(|u|); kOutsideDomain when gamma >= 1 and u vanishes at a node.
double energy_value(const EnergyContext& ctx, const GridFunction& u);

/// I with G(|u|) replaced by G(u + eps). kOutsideDomain if u + eps <= 0 somewhere and gamma >= 1.
double energy_reg(const EnergyContext& ctx, const GridFunction& u, double eps);

/// Gradient of energy_reg: A u - w a (u + eps)^{-gamma} - lambda w f(u).
GridFunction residual_reg(const EnergyContext& ctx, const GridFunction& u, double eps);

/// Same expression with shift >= 0 (shift = 0 is the unregularized Euler-Lagrange residual).
GridFunction euler_lagrange_residual(const EnergyContext& ctx, const GridFunction& u, double shift);

/// int F(u).
double integral_big_f(const EnergyContext& ctx, const GridFunction& u);

/// int a |u|^{1-gamma}.
double singular_integral(const EnergyContext& ctx, const GridFunction& u);

/// H(u) = |u|^2 - lambda theta int u^2.
double h_lambda(const EnergyContext& ctx, const GridFunction& u);

/// J(u) = H(u)/2 - int a |u|^{1-gamma} / (1 - gamma); gamma != 1.
double j_lambda(const EnergyContext& ctx, const GridFunction& u);

struct TStar {
  double t;
  double j_min;
};

/// Minimizer of t -> J(t u) over t > 0 and the minimum value, in closed form.
TStar t_star(const EnergyContext& ctx, const GridFunction& u);

/// |u|^2 - lambda int f(u) u - int a u^{1-gamma}, i.e. d/dt I(t u) at t = 1.
double nehari_residual(const EnergyContext& ctx, const GridFunction& u);

/// J(t* phi1 phi1): an upper bound for the minimal energy.
double phi1_upper_bound(const EnergyContext& ctx, const Eigenpair& eig);

}  // namespace singell
