#include "singell/oracle.hpp"

#include <stdexcept>

namespace singell::oracle {

namespace {

// Dirichlet Laplacian stencil scaled by the cell measure, applied node by node.
Vector stencil_apply(const Grid& grid, const Vector& v) {
  const int n = grid.n();
  Vector out(v.size());
  if (grid.dim() == 1) {
    const double h = grid.hx();
    for (int i = 0; i < n; ++i) {
      const double left = i > 0 ? v[i - 1] : 0.0;
      const double right = i + 1 < n ? v[i + 1] : 0.0;
      out[i] = (2.0 * v[i] - left - right) / h;
    }
    return out;
  }
  const double cx = grid.hy() / grid.hx();
  const double cy = grid.hx() / grid.hy();
  auto at = [&](int i, int j) { return (i < 0 || j < 0 || i >= n || j >= n) ? 0.0 : v[grid.index(i, j)]; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      out[grid.index(i, j)] = cx * (2.0 * at(i, j) - at(i - 1, j) - at(i + 1, j)) +
                              cy * (2.0 * at(i, j) - at(i, j - 1) - at(i, j + 1));
  return out;
}

double cell_measure(const Grid& grid) { return grid.dim() == 1 ? grid.hx() : grid.hx() * grid.hy(); }

// G(x + d) - G(x) for x > 0.
double g_increment(SingularExponent gamma, double x, double d) {
  const double y = x + d;
  if (gamma.gamma == 1.0) return y > 0.0 ? std::log1p(d / x) : kOutsideDomain;
  if (y > 0.0) {
    const double p = 1.0 - gamma.gamma;
    return std::pow(x, p) * std::expm1(p * std::log1p(d / x)) / p;
  }
  if (gamma.strong()) return kOutsideDomain;
  return g_value(gamma, std::abs(y)) - g_value(gamma, x);
}

void require_small(const EnergyContext& ctx) {
  if (ctx.grid().size() > kMaxNodes)
    throw std::invalid_argument("oracle is limited to " + std::to_string(kMaxNodes) + " unknowns");
}

}  // namespace

Vector stencil_gradient(const EnergyContext& ctx, const Vector& u, double eps) {
  const Grid& grid = ctx.grid();
  const double w = cell_measure(grid);
  Vector g = stencil_apply(grid, u);
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    const double x = u[k] + eps;
    // d/du G(|u + eps|) = sign(u + eps) |u + eps|^{-gamma}
    if (ctx.has_singular_term())
      g[k] -= w * ctx.a()[k] * std::copysign(std::pow(std::abs(x), -ctx.gamma().gamma), x);
    g[k] -= w * ctx.lambda() * f_eval(ctx.f(), u[k]);
  }
  return g;
}

double energy_increment(const EnergyContext& ctx, const Vector& u, const Vector& d, double eps) {
  const Grid& grid = ctx.grid();
  const double w = cell_measure(grid);
  const Vector ad = stencil_apply(grid, d);
  double delta = u.dot(ad) + 0.5 * d.dot(ad);
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    delta -= w * ctx.lambda() * big_f_increment(ctx.f(), u[k], d[k]);
    if (ctx.has_singular_term()) {
      const double x = u[k] + eps;
      if (!(x > 0.0)) throw std::domain_error("energy increment from a point outside the positive cone");
      const double dg = g_increment(ctx.gamma(), x, d[k]);
      if (outside_domain(dg)) return kOutsideDomain;
      delta -= w * ctx.a()[k] * dg;
    }
  }
  return delta;
}

namespace {

DescentRun descend(const EnergyContext& ctx, Vector u, double eps, const OracleConfig& config) {
  const Grid& grid = ctx.grid();
  double step = config.step0;
  long it = 0;
  for (; it < config.max_iters; ++it) {
    const Vector g = stencil_gradient(ctx, u, eps);
    const double gnorm2 = g.squaredNorm();
    const double scale = std::max(1.0, stencil_apply(grid, u).norm());
    if (std::sqrt(gnorm2) <= config.tol * scale) break;

    double s = 2.0 * step;
    bool accepted = false;
    for (int halving = 0; halving < 80; ++halving, s *= 0.5) {
      const Vector d = -s * g;
      const double de = energy_increment(ctx, u, d, eps);
      if (!outside_domain(de) && de <= -1e-4 * s * gnorm2) {
        u += d;
        step = s;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (std::sqrt(gnorm2) <= 1e3 * config.tol * scale) break;
      throw std::runtime_error("gradient descent made no progress");
    }
  }
  GridFunction out(ctx.grid_ptr(), std::move(u));
  const double e = energy_reg(ctx, out, eps);
  return DescentRun{std::move(out), e, it};
}

}  // namespace

std::vector<DescentRun> descent_runs(const EnergyContext& ctx, double eps, const OracleConfig& config) {
  require_small(ctx);
  if (!(eps > 0.0)) throw std::invalid_argument("oracle eps must be positive");
  const auto& grid = ctx.grid_ptr();
  const Eigenpair eig = principal_eigenpair(ctx.ops());
  std::vector<Vector> starts = {0.5 * eig.phi1.values(), boundary_distance(grid).values(),
                                Vector::Constant(grid->size(), 0.1)};
  std::vector<DescentRun> runs;
  runs.reserve(starts.size());
  for (auto& s : starts) runs.push_back(descend(ctx, std::move(s), eps, config));
  return runs;
}

GridFunction brute_force_minimize(const EnergyContext& ctx, double eps, const OracleConfig& config) {
  auto runs = descent_runs(ctx, eps, config);
  std::size_t best = 0;
  for (std::size_t i = 1; i < runs.size(); ++i)
    if (runs[i].energy < runs[best].energy) best = i;
  return std::move(runs[best].u);
}

PsiMin scalar_psi_min(const EnergyContext& ctx, const GridFunction& u) {
  auto psi = [&](double t) { return j_lambda(ctx, t * u); };
  constexpr int kPoints = 2000;
  const double lo = std::log(1e-6), hi = std::log(1e3);
  std::vector<double> ts(kPoints), vals(kPoints);
  int best = 0;
  for (int i = 0; i < kPoints; ++i) {
    ts[i] = std::exp(lo + (hi - lo) * double(i) / double(kPoints - 1));
    vals[i] = psi(ts[i]);
    if (vals[i] < vals[best]) best = i;
  }
  if (best == 0 || best == kPoints - 1) throw std::runtime_error("psi has no interior minimum on [1e-6, 1e3]");

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = ts[best - 1], b = ts[best + 1];
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = psi(c), fd = psi(d);
  while (b - a > 1e-10 * 0.5 * (a + b)) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = psi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = psi(d);
    }
  }
  const double t = 0.5 * (a + b);
  return PsiMin{t, psi(t)};
}

}  // namespace singell::oracle
