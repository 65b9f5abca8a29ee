#include "singell/energy.hpp"

#include <stdexcept>

namespace singell {

namespace {

void require_positive(const GridFunction& u, const char* what) {
  for (Eigen::Index k = 0; k < u.size(); ++k)
    if (!(u[k] > 0.0)) throw std::domain_error(std::string(what) + " requires nodal values > 0");
}

void require_gamma_not_one(const EnergyContext& ctx) {
  if (ctx.gamma().gamma == 1.0) throw std::domain_error("J_lambda and t_lambda are not defined for gamma = 1");
}

// sum_k w_k a_k G(v_k); kOutsideDomain if some weighted node hits G = +inf.
double weighted_g_sum(const EnergyContext& ctx, const Vector& v) {
  if (!ctx.has_singular_term()) return 0.0;
  const Vector& w = ctx.ops().quad;
  const Vector& a = ctx.a();
  double acc = 0.0;
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double g = g_value(ctx.gamma(), v[k]);
    if (std::isinf(g)) return kOutsideDomain;
    acc += w[k] * a[k] * g;
  }
  return acc;
}

}  // namespace

EnergyContext::EnergyContext(OperatorsPtr<double> ops, SingularExponent gamma, Weight weight, Nonlinearity f,
                             double lambda)
    : ops_(std::move(ops)), gamma_(gamma), weight_(std::move(weight)), f_(std::move(f)), lambda_(lambda) {
  if (!ops_) throw std::invalid_argument("energy context needs assembled operators");
  if (!(lambda_ >= 0.0) || !std::isfinite(lambda_)) throw std::invalid_argument("lambda must be >= 0");
  a_ = weight_.evaluate(ops_->grid);
  for (Eigen::Index k = 0; k < a_.size(); ++k)
    if (!(a_[k] > 0.0) || !std::isfinite(a_[k]))
      throw std::invalid_argument("weight must be finite and positive at every interior node");
}

EnergyContext EnergyContext::without_singular_term(OperatorsPtr<double> ops, SingularExponent gamma, Nonlinearity f,
                                                   double lambda) {
  if (!ops) throw std::invalid_argument("energy context needs assembled operators");
  if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be >= 0");
  EnergyContext ctx;
  ctx.ops_ = std::move(ops);
  ctx.gamma_ = gamma;
  ctx.f_ = std::move(f);
  ctx.lambda_ = lambda;
  ctx.a_ = Vector::Zero(ctx.ops_->grid->size());
  ctx.singular_ = false;
  return ctx;
}

EnergyContext EnergyContext::with_lambda(double lambda) const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be >= 0");
  EnergyContext copy = *this;
  copy.lambda_ = lambda;
  return copy;
}

double integral_big_f(const EnergyContext& ctx, const GridFunction& u) {
  require_on(ctx.ops(), u);
  const Vector& w = ctx.ops().quad;
  double acc = 0.0;
  for (Eigen::Index k = 0; k < u.size(); ++k) acc += w[k] * big_f_eval(ctx.f(), u[k]);
  return acc;
}

double singular_integral(const EnergyContext& ctx, const GridFunction& u) {
  require_on(ctx.ops(), u);
  const Vector& w = ctx.ops().quad;
  const Vector& a = ctx.a();
  double acc = 0.0;
  for (Eigen::Index k = 0; k < u.size(); ++k) acc += w[k] * a[k] * power_one_minus_gamma(ctx.gamma(), u[k]);
  return acc;
}

double energy_value(const EnergyContext& ctx, const GridFunction& u) {
  require_on(ctx.ops(), u);
  const double sing = weighted_g_sum(ctx, u.values().cwiseAbs());
  if (outside_domain(sing)) return kOutsideDomain;
  return 0.5 * h1_norm_squared(ctx.ops(), u) - ctx.lambda() * integral_big_f(ctx, u) - sing;
}

double energy_reg(const EnergyContext& ctx, const GridFunction& u, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("regularization eps must be positive");
  require_on(ctx.ops(), u);
  Vector shifted = u.values().array() + eps;
  if (ctx.gamma().strong()) {
    if ((shifted.array() <= 0.0).any()) return kOutsideDomain;
  } else {
    shifted = shifted.cwiseAbs();
  }
  const double sing = weighted_g_sum(ctx, shifted);
  if (outside_domain(sing)) return kOutsideDomain;
  return 0.5 * h1_norm_squared(ctx.ops(), u) - ctx.lambda() * integral_big_f(ctx, u) - sing;
}

GridFunction euler_lagrange_residual(const EnergyContext& ctx, const GridFunction& u, double shift) {
  if (!(shift >= 0.0)) throw std::invalid_argument("shift must be >= 0");
  require_on(ctx.ops(), u);
  const Vector& w = ctx.ops().quad;
  const Vector& a = ctx.a();
  const double g = ctx.gamma().gamma;
  Vector r = ctx.ops().stiffness * u.values();
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    const double s = u[k] + shift;
    if (ctx.has_singular_term()) {
      if (!(s > 0.0)) throw std::domain_error("residual evaluated at a non-positive node");
      r[k] -= w[k] * a[k] * std::pow(s, -g);
    }
    r[k] -= ctx.lambda() * w[k] * f_eval(ctx.f(), u[k]);
  }
  return GridFunction(ctx.grid_ptr(), std::move(r));
}

GridFunction residual_reg(const EnergyContext& ctx, const GridFunction& u, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("regularization eps must be positive");
  return euler_lagrange_residual(ctx, u, eps);
}

double h_lambda(const EnergyContext& ctx, const GridFunction& u) {
  require_on(ctx.ops(), u);
  return h1_norm_squared(ctx.ops(), u) - ctx.lambda() * ctx.theta() * ctx.ops().quad.dot(u.values().cwiseAbs2());
}

double j_lambda(const EnergyContext& ctx, const GridFunction& u) {
  require_gamma_not_one(ctx);
  if (ctx.gamma().strong()) require_positive(u, "J_lambda with gamma > 1");
  return 0.5 * h_lambda(ctx, u) - singular_integral(ctx, u) / (1.0 - ctx.gamma().gamma);
}

TStar t_star(const EnergyContext& ctx, const GridFunction& u) {
  require_gamma_not_one(ctx);
  if (ctx.gamma().strong()) require_positive(u, "t_lambda with gamma > 1");
  const double g = ctx.gamma().gamma;
  const double h = h_lambda(ctx, u);
  if (!(h > 0.0)) throw std::domain_error("H_lambda(u) <= 0; lambda is not below lambda*");
  const double s = singular_integral(ctx, u);
  if (!(s > 0.0)) throw std::domain_error("t_lambda needs int a |u|^{1-gamma} > 0");
  const double ratio = s / h;
  const double t = std::pow(ratio, 1.0 / (1.0 + g));
  const double j_min = -((1.0 + g) / (2.0 * (1.0 - g))) * s * std::pow(ratio, (1.0 - g) / (1.0 + g));
  return TStar{t, j_min};
}

double nehari_residual(const EnergyContext& ctx, const GridFunction& u) {
  require_on(ctx.ops(), u);
  require_positive(u, "the Nehari residual");
  const Vector& w = ctx.ops().quad;
  double pairing = 0.0;
  for (Eigen::Index k = 0; k < u.size(); ++k) pairing += w[k] * f_eval(ctx.f(), u[k]) * u[k];
  return h1_norm_squared(ctx.ops(), u) - ctx.lambda() * pairing - singular_integral(ctx, u);
}

double phi1_upper_bound(const EnergyContext& ctx, const Eigenpair& eig) { return t_star(ctx, eig.phi1).j_min; }

}  // namespace singell
