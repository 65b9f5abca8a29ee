// Problem data: singular exponent, weight a(x), nonlinearity f and its primitive F.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>

#include "singell/grid.hpp"

namespace singell {

struct SingularExponent {
  enum class Branch { Sublinear, Log, Strong };

  double gamma;

  explicit SingularExponent(double g) : gamma(g) {
    if (!(g > 0.0) || !std::isfinite(g)) throw std::invalid_argument("singular exponent must be positive");
  }

  Branch branch() const {
    if (gamma < 1.0) return Branch::Sublinear;
    if (gamma == 1.0) return Branch::Log;
    return Branch::Strong;
  }

  /// True when G(0) = +inf, so any vanishing node leaves the effective domain.
  bool strong() const { return gamma >= 1.0; }
};

/// G(t) for t >= 0: t^{1-g}/(1-g) for g != 1, ln t for g = 1, and +inf at t = 0 when g >= 1.
template <typename Scalar>
Scalar g_value(SingularExponent gamma, Scalar t) {
  using std::log;
  using std::pow;
  if (t < Scalar(0)) throw std::domain_error("G is only evaluated at non-negative arguments");
  const Scalar g(gamma.gamma);
  if (gamma.branch() == SingularExponent::Branch::Sublinear) return pow(t, Scalar(1) - g) / (Scalar(1) - g);
  if (t == Scalar(0)) return std::numeric_limits<Scalar>::infinity();
  if (gamma.branch() == SingularExponent::Branch::Log) return log(t);
  return pow(t, Scalar(1) - g) / (Scalar(1) - g);
}

/// |t|^{1-g}; the integrand of the Nehari and J functionals.
template <typename Scalar>
Scalar power_one_minus_gamma(SingularExponent gamma, Scalar t) {
  using std::abs;
  using std::pow;
  if (gamma.gamma == 1.0) return Scalar(1);
  return pow(abs(t), Scalar(1) - Scalar(gamma.gamma));
}

struct Weight {
  struct Constant {
    double c;
  };
  struct DistPow {
    double eta;
    double scale = 1.0;
  };
  struct Nodal {
    GridFunction values;
  };

  std::variant<Constant, DistPow, Nodal> kind;

  static Weight constant(double c);
  static Weight dist_pow(double eta, double scale = 1.0);
  static Weight nodal(GridFunction values);

  /// Nodal values a(x_k) at the interior nodes of `grid`.
  Vector evaluate(const GridPtr<double>& grid) const;

  std::string describe() const;
};

struct Nonlinearity {
  struct Linear {};
  struct AffineSublinear {
    double a;
    double r;
  };
  struct Custom {
    std::function<double(double)> f;
    double theta;
    std::string name = "custom";
  };

  std::variant<Linear, AffineSublinear, Custom> kind;

  static Nonlinearity linear();
  static Nonlinearity affine(double a, double r);
  /// Rejects `theta` when it disagrees with the sampled slope f(S)/S by more than 1e-3 relative.
  static Nonlinearity custom(std::function<double(double)> f, double theta, std::string name = "custom");
  /// Same as custom() but skips the slope cross-check (used for deliberately inadmissible f in tests).
  static Nonlinearity custom_unchecked(std::function<double(double)> f, double theta, std::string name = "custom");

  /// Asymptotic slope lim f(s)/s.
  double theta() const;
  /// f(0).
  double at_zero() const;
  std::string describe() const;
};

/// f_0: f(t) for t >= 0 and f(0) for t < 0.
double f_eval(const Nonlinearity& f, double t);

/// f_0'(t) for the Newton Jacobian; the r t^{r-1} term is evaluated at max(t, floor).
double f_prime(const Nonlinearity& f, double t, double floor);

/// F(t) = int_0^t f_0(s) ds.
double big_f_eval(const Nonlinearity& f, double t);

/// F(t + d) - F(t) without cancellation for small d.
double big_f_increment(const Nonlinearity& f, double t, double d);

/// Adaptive Simpson quadrature; throws std::runtime_error when the recursion budget runs out.
double adaptive_simpson(const std::function<double(double)>& fn, double a, double b, double tol = 1e-10,
                        int max_depth = 50);

struct FConditionsReport {
  double theta_est = 0.0;
  bool monotone_ok = false;
  bool lower_bound_ok = false;
  /// Smallest c with f(s) <= (theta_est + growth_eps) s + c on the samples.
  double growth_c = 0.0;
  double growth_eps = 0.1;
};

/// Samples f(s)/s on a log grid over [1e-6, 1e8].
FConditionsReport check_f_conditions(const Nonlinearity& f, int samples, double growth_eps = 0.1);

/// Discrete stand-in for D != {} (see README for the exact rules).
bool weight_admissible(const Weight& w, SingularExponent gamma);

/// Variant that can evaluate the phi_1-based surrogate for nodal weights.
bool weight_admissible(const Weight& w, SingularExponent gamma, const GridFunction& phi1, const Vector& quad);

}  // namespace singell
