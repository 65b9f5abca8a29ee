#include "singell/model.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "singell/spectral.hpp"

namespace singell {

namespace {

std::string fmt_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double simpson_step(const std::function<double(double)>& fn, double a, double fa, double b, double fb, double m,
                    double fm, double whole, double tol, int depth) {
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = fn(lm);
  const double frm = fn(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  if (depth <= 0) throw std::runtime_error("adaptive Simpson quadrature did not converge");
  return simpson_step(fn, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_step(fn, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

// (t + d)^p - t^p for t > 0, t + d > 0.
double power_increment(double t, double d, double p) {
  return std::pow(t, p) * std::expm1(p * std::log1p(d / t));
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& fn, double a, double b, double tol, int max_depth) {
  if (a == b) return 0.0;
  const double fa = fn(a);
  const double fb = fn(b);
  const double m = 0.5 * (a + b);
  const double fm = fn(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double scaled_tol = tol * std::max(1.0, std::abs(whole));
  return simpson_step(fn, a, fa, b, fb, m, fm, whole, scaled_tol, max_depth);
}

Weight Weight::constant(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("constant weight must be positive");
  return Weight{Constant{c}};
}

Weight Weight::dist_pow(double eta, double scale) {
  if (!std::isfinite(eta)) throw std::invalid_argument("distance-power exponent must be finite");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw std::invalid_argument("distance-power scale must be positive");
  return Weight{DistPow{eta, scale}};
}

Weight Weight::nodal(GridFunction values) {
  for (Eigen::Index k = 0; k < values.size(); ++k)
    if (!(values[k] > 0.0) || !std::isfinite(values[k]))
      throw std::invalid_argument("nodal weight must be finite and positive at every interior node");
  return Weight{Nodal{std::move(values)}};
}

Vector Weight::evaluate(const GridPtr<double>& grid) const {
  return std::visit(
      [&](const auto& k) -> Vector {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Constant>) {
          return Vector::Constant(grid->size(), k.c);
        } else if constexpr (std::is_same_v<K, DistPow>) {
          return k.scale * boundary_distance(grid).values().array().pow(k.eta).matrix();
        } else {
          k.values.require_grid(*grid);
          return k.values.values();
        }
      },
      kind);
}

std::string Weight::describe() const {
  return std::visit(
      [](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Constant>)
          return "constant:" + fmt_real(k.c);
        else if constexpr (std::is_same_v<K, DistPow>)
          return "distpow:" + fmt_real(k.eta) + ":" + fmt_real(k.scale);
        else
          return "nodal";
      },
      kind);
}

Nonlinearity Nonlinearity::linear() { return Nonlinearity{Linear{}}; }

Nonlinearity Nonlinearity::affine(double a, double r) {
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("affine nonlinearity needs a > 0");
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("affine nonlinearity needs r in (0, 1)");
  return Nonlinearity{AffineSublinear{a, r}};
}

Nonlinearity Nonlinearity::custom_unchecked(std::function<double(double)> f, double theta, std::string name) {
  if (!f) throw std::invalid_argument("custom nonlinearity needs a callable");
  if (!(theta > 0.0) || !std::isfinite(theta)) throw std::invalid_argument("theta must lie in (0, inf)");
  return Nonlinearity{Custom{std::move(f), theta, std::move(name)}};
}

Nonlinearity Nonlinearity::custom(std::function<double(double)> f, double theta, std::string name) {
  Nonlinearity nl = custom_unchecked(std::move(f), theta, std::move(name));
  const auto report = check_f_conditions(nl, 64);
  if (std::abs(report.theta_est - theta) > 1e-3 * theta)
    throw std::invalid_argument("supplied theta " + fmt_real(theta) + " disagrees with sampled slope " +
                                fmt_real(report.theta_est));
  return nl;
}

double Nonlinearity::theta() const {
  return std::visit(
      [](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Linear>)
          return 1.0;
        else if constexpr (std::is_same_v<K, AffineSublinear>)
          return k.a;
        else
          return k.theta;
      },
      kind);
}

double Nonlinearity::at_zero() const { return f_eval(*this, 0.0); }

std::string Nonlinearity::describe() const {
  return std::visit(
      [](const auto& k) -> std::string {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Linear>)
          return "linear";
        else if constexpr (std::is_same_v<K, AffineSublinear>)
          return "affine:" + fmt_real(k.a) + ":" + fmt_real(k.r);
        else
          return k.name;
      },
      kind);
}

double f_eval(const Nonlinearity& f, double t) {
  const double s = std::max(t, 0.0);
  return std::visit(
      [s](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Nonlinearity::Linear>)
          return s;
        else if constexpr (std::is_same_v<K, Nonlinearity::AffineSublinear>)
          return k.a * s + std::pow(s, k.r) + 1.0;
        else
          return k.f(s);
      },
      f.kind);
}

double f_prime(const Nonlinearity& f, double t, double floor) {
  if (t < 0.0) return 0.0;
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Nonlinearity::Linear>) {
          return 1.0;
        } else if constexpr (std::is_same_v<K, Nonlinearity::AffineSublinear>) {
          return k.a + k.r * std::pow(std::max(t, floor), k.r - 1.0);
        } else {
          const double step = 1e-6 * std::max(1.0, std::abs(t));
          if (t - step < 0.0) return (k.f(t + step) - k.f(t)) / step;
          return (k.f(t + step) - k.f(t - step)) / (2.0 * step);
        }
      },
      f.kind);
}

double big_f_eval(const Nonlinearity& f, double t) {
  if (t < 0.0) return f.at_zero() * t;
  return std::visit(
      [t](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Nonlinearity::Linear>)
          return 0.5 * t * t;
        else if constexpr (std::is_same_v<K, Nonlinearity::AffineSublinear>)
          return 0.5 * k.a * t * t + std::pow(t, 1.0 + k.r) / (1.0 + k.r) + t;
        else
          return adaptive_simpson(k.f, 0.0, t);
      },
      f.kind);
}

double big_f_increment(const Nonlinearity& f, double t, double d) {
  if (d == 0.0) return 0.0;
  if (t <= 0.0 || t + d <= 0.0) return big_f_eval(f, t + d) - big_f_eval(f, t);
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Nonlinearity::Linear>)
          return d * (t + 0.5 * d);
        else if constexpr (std::is_same_v<K, Nonlinearity::AffineSublinear>)
          return k.a * d * (t + 0.5 * d) + power_increment(t, d, 1.0 + k.r) / (1.0 + k.r) + d;
        else
          return adaptive_simpson(k.f, t, t + d);
      },
      f.kind);
}

FConditionsReport check_f_conditions(const Nonlinearity& f, int samples, double growth_eps) {
  if (samples < 16) throw std::invalid_argument("check_f_conditions needs at least 16 samples");
  FConditionsReport rep;
  rep.growth_eps = growth_eps;
  std::vector<double> s(static_cast<std::size_t>(samples)), fs(static_cast<std::size_t>(samples));
  const double lo = -6.0, hi = 8.0;
  for (int i = 0; i < samples; ++i) {
    s[i] = std::pow(10.0, lo + (hi - lo) * double(i) / double(samples - 1));
    fs[i] = f_eval(f, s[i]);
  }
  rep.theta_est = fs.back() / s.back();
  rep.monotone_ok = true;
  for (int i = 0; i + 1 < samples; ++i) {
    const double q0 = fs[i] / s[i];
    const double q1 = fs[i + 1] / s[i + 1];
    if (q1 > q0 + 1e-12 * std::max(1.0, std::abs(q0))) rep.monotone_ok = false;
  }
  rep.lower_bound_ok = true;
  double c = 0.0;
  for (int i = 0; i < samples; ++i) {
    if (fs[i] < rep.theta_est * s[i] * (1.0 - 1e-12)) rep.lower_bound_ok = false;
    c = std::max(c, fs[i] - (rep.theta_est + growth_eps) * s[i]);
  }
  rep.growth_c = c;
  return rep;
}

bool weight_admissible(const Weight& w, SingularExponent gamma, const GridFunction& phi1, const Vector& quad) {
  if (const auto* nodal = std::get_if<Weight::Nodal>(&w.kind)) {
    if (!gamma.strong() || gamma.gamma == 1.0) return true;
    nodal->values.require_same(phi1);
    const Vector terms = nodal->values.values().array() * phi1.values().array().pow(1.0 - gamma.gamma);
    const double integral = quad.dot(terms);
    return std::isfinite(integral);
  }
  return weight_admissible(w, gamma);
}

bool weight_admissible(const Weight& w, SingularExponent gamma) {
  return std::visit(
      [&](const auto& k) -> bool {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Weight::Constant>) {
          return gamma.gamma <= 1.0;
        } else if constexpr (std::is_same_v<K, Weight::DistPow>) {
          if (gamma.gamma <= 1.0) return k.eta >= 0.0;
          return 1.0 + k.eta - gamma.gamma > 0.0;
        } else {
          if (gamma.gamma <= 1.0) return true;
          auto ops = assemble_operators(k.values.grid_ptr());
          const Eigenpair eig = principal_eigenpair(*ops);
          return weight_admissible(w, gamma, eig.phi1, ops->quad);
        }
      },
      w.kind);
}

}  // namespace singell
