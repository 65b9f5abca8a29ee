#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "support.hpp"

using namespace singell;
using namespace testing;
using std::numbers::pi;

TEST_CASE("energy context validates lambda and weights") {
  auto ops = assemble_operators(build_grid(Domain::interval(0, 1), 9));
  CHECK_THROWS_AS(EnergyContext(ops, SingularExponent(0.5), Weight::constant(1), Nonlinearity::linear(), -1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(EnergyContext(ops, SingularExponent(0.5), Weight::dist_pow(-800.0), Nonlinearity::linear(), 0.0),
                  std::invalid_argument);
  const EnergyContext ctx(ops, SingularExponent(0.5), Weight::constant(2), Nonlinearity::linear(), 1.0);
  CHECK(ctx.with_lambda(3.0).lambda() == 3.0);
  CHECK(ctx.lambda() == 1.0);
  CHECK(ctx.a() == Vector::Constant(9, 2.0));
  CHECK_THROWS_AS(ctx.with_lambda(-0.1), std::invalid_argument);
}

TEST_CASE("energy is outside the domain at u = 0 for gamma >= 1") {
  for (double gamma : {1.0, 1.5}) {
    auto p = make_problem(gamma, Weight::dist_pow(0.8), Nonlinearity::linear(), 17);
    const GridFunction zero(p.ops->grid);
    CHECK(outside_domain(energy_value(p.family, zero)));
    GridFunction one_zero = p.eig.phi1;
    one_zero[3] = 0.0;
    CHECK(outside_domain(energy_value(p.family, one_zero)));
  }
  auto p = make_problem(0.5, Weight::constant(1), Nonlinearity::linear(), 17);
  CHECK(energy_value(p.family, GridFunction(p.ops->grid)) == 0.0);
}

TEST_CASE("energy of sin(pi x) at lambda = 0, gamma = 1/2") {
  auto p = make_problem(0.5, Weight::constant(1), Nonlinearity::linear(), 1024);
  const auto u = GridFunction::sample(p.ops->grid, [](double x) { return std::sin(pi * x); });
  // int_0^1 sin(pi x)^{1/2} dx = Gamma(3/4) Gamma(1/2) / (pi Gamma(5/4))
  const double int_sqrt_sin = std::tgamma(0.75) * std::sqrt(pi) / (pi * std::tgamma(1.25));
  const double ref = 0.5 * (pi * pi / 2) - 2.0 * int_sqrt_sin;
  CHECK(std::abs(energy_value(p.family, u) - ref) <= 1e-4);
}

TEST_CASE("replacing u by |u| never raises the energy") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> ud(-1.0, 1.0);
  for (auto f : {Nonlinearity::linear(), Nonlinearity::affine(2, 0.5)}) {
    auto p = make_problem(0.5, Weight::constant(1), f, 33);
    const EnergyContext ctx = p.family.with_lambda(0.5 * p.lambda_star);
    for (int t = 0; t < 20; ++t) {
      Vector v(33);
      for (auto& x : v) x = ud(rng);
      const GridFunction u(p.ops->grid, v);
      CHECK(energy_value(ctx, u) >= energy_value(ctx, abs(u)));
      CHECK(energy_value(ctx, abs(u)) == energy_value(ctx, abs(abs(u))));
    }
  }
}

TEST_CASE("residual with no singular term and lambda = 0 is A u") {
  auto ops = assemble_operators(build_grid(Domain::interval(0, 1), 21));
  const auto ctx = EnergyContext::without_singular_term(ops, SingularExponent(0.5), Nonlinearity::linear(), 0.0);
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> ud(0.0, 1.0);
  Vector v(21);
  for (auto& x : v) x = ud(rng);
  const GridFunction u(ops->grid, v);
  CHECK((residual_reg(ctx, u, 1e-3).values() - ops->stiffness * v).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("residual_reg is the gradient of energy_reg") {
  std::mt19937_64 rng(23);
  for (int n : {17, 33, 65}) {
    for (double gamma : {0.5, 1.0, 1.5}) {
      for (auto f : {Nonlinearity::linear(), Nonlinearity::affine(2, 0.5)}) {
        auto p = make_problem(gamma, gamma > 1 ? Weight::dist_pow(0.8) : Weight::constant(1), f, n);
        const EnergyContext ctx = p.family.with_lambda(0.4 * p.lambda_star);
        const GridFunction u = random_positive(p.eig, rng);
        for (double eps : {1e-2, 1e-6}) {
          const Vector r = residual_reg(ctx, u, eps).values();
          const Vector fd = fd_gradient(ctx, u, eps);
          CHECK((fd - r).cwiseAbs().maxCoeff() <= 1e-5 * r.cwiseAbs().maxCoeff());
        }
      }
    }
  }
}

TEST_CASE("residual argument checks") {
  auto p = sublinear(9);
  CHECK_THROWS_AS(residual_reg(p.family, p.eig.phi1, 0.0), std::invalid_argument);
  auto other = build_grid(Domain::interval(0, 1), 10);
  CHECK_THROWS_AS(residual_reg(p.family, GridFunction::constant(other, 1.0), 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(energy_value(p.family, GridFunction::constant(other, 1.0)), std::invalid_argument);
  CHECK_THROWS_AS(energy_reg(p.family, p.eig.phi1, -1.0), std::invalid_argument);
}

TEST_CASE("H_lambda") {
  auto p = sublinear(64);
  const double int_phi_sq = p.ops->quad.dot(p.eig.phi1.values().cwiseAbs2());
  for (double frac : {0.0, 0.3, 0.9}) {
    const EnergyContext ctx = p.family.with_lambda(frac * p.lambda_star);
    CHECK(h_lambda(ctx, p.eig.phi1) ==
          doctest::Approx((p.eig.delta1 - ctx.lambda() * ctx.theta()) * int_phi_sq).epsilon(1e-10));
  }
  std::mt19937_64 rng(24);
  std::normal_distribution<double> nd;
  const EnergyContext near = p.family.with_lambda(0.999 * p.lambda_star);
  for (int t = 0; t < 20; ++t) {
    Vector v(64);
    for (auto& x : v) x = nd(rng);
    const GridFunction u(p.ops->grid, v);
    CHECK(h_lambda(p.family, u) == doctest::Approx(h1_norm_squared(*p.ops, u)));
    CHECK(h_lambda(near, u) > 0.0);
  }
}

TEST_CASE("J_lambda scaling and the lambda = 0 reference") {
  auto p = sublinear(64);
  const EnergyContext ctx = p.family.with_lambda(0.3 * p.lambda_star);
  const GridFunction& u = p.eig.phi1;
  const double direct = j_lambda(ctx, 2.0 * u);
  const double scaled = 4.0 * 0.5 * h_lambda(ctx, u) - std::pow(2.0, 0.5) * 2.0 * singular_integral(ctx, u);
  CHECK(direct == doctest::Approx(scaled).epsilon(1e-12));

  double half_norm = 0.0, root = 0.0;
  const double h = p.ops->grid->hx();
  const Vector& phi = u.values();
  for (Eigen::Index k = 0; k <= phi.size(); ++k) {
    const double l = k > 0 ? phi[k - 1] : 0.0, r = k < phi.size() ? phi[k] : 0.0;
    half_norm += 0.5 * (r - l) * (r - l) / h;
  }
  for (Eigen::Index k = 0; k < phi.size(); ++k) root += h * std::sqrt(phi[k]);
  CHECK(j_lambda(p.family, u) == doctest::Approx(half_norm - 2.0 * root).epsilon(1e-12));

  auto log_case = make_problem(1.0, Weight::constant(1), Nonlinearity::linear(), 17);
  CHECK_THROWS_AS(j_lambda(log_case.family, log_case.eig.phi1), std::domain_error);
  CHECK_THROWS_AS(t_star(log_case.family, log_case.eig.phi1), std::domain_error);
}

TEST_CASE("I <= J on D+, strictly for the affine preset") {
  std::mt19937_64 rng(25);
  for (double gamma : {0.5, 1.5}) {
    for (auto f : {Nonlinearity::linear(), Nonlinearity::affine(2, 0.5)}) {
      auto p = make_problem(gamma, gamma > 1 ? Weight::dist_pow(0.8) : Weight::constant(1), f, 33);
      for (double frac : {0.25, 0.5, 0.75}) {
        const EnergyContext ctx = p.family.with_lambda(frac * p.lambda_star);
        for (int t = 0; t < 50; ++t) {
          const GridFunction u = random_positive(p.eig, rng, 0.1, 3.0);
          const double i = energy_value(ctx, u), j = j_lambda(ctx, u);
          if (f.at_zero() > 0.0)
            CHECK(i < j);
          else
            CHECK(i <= j + 1e-12 * std::abs(j));
        }
      }
    }
  }
}

TEST_CASE("t_star signs and the phi1 bound near lambda*") {
  for (double gamma : {0.5, 1.5}) {
    auto p = make_problem(gamma, gamma > 1 ? Weight::dist_pow(0.8) : Weight::constant(1), Nonlinearity::linear(), 65);
    const TStar ts = t_star(p.family.with_lambda(0.5 * p.lambda_star), p.eig.phi1);
    CHECK(ts.t > 0.0);
    if (gamma < 1)
      CHECK(ts.j_min < 0.0);
    else
      CHECK(ts.j_min > 0.0);
    CHECK(phi1_upper_bound(p.family, p.eig) == doctest::Approx(t_star(p.family, p.eig.phi1).j_min));
  }
  auto p = strong(65);
  const double mid = phi1_upper_bound(p.family.with_lambda(0.5 * p.lambda_star), p.eig);
  double prev = std::numeric_limits<double>::infinity();
  for (double frac : {0.5, 0.9, 0.99, 0.999, 0.99999}) {
    const double b = phi1_upper_bound(p.family.with_lambda(frac * p.lambda_star), p.eig);
    CHECK(b > 0.0);
    CHECK(b < prev);
    // only H depends on lambda, and H(phi1) is proportional to lambda* - lambda
    CHECK(b / mid == doctest::Approx(std::pow((1 - frac) / 0.5, 0.5 / 2.5)).epsilon(1e-8));
    prev = b;
  }
  CHECK_THROWS_AS(t_star(p.family.with_lambda(1.01 * p.lambda_star), p.eig.phi1), std::domain_error);
}

TEST_CASE("t_star is the minimizer of t -> J(t u)") {
  auto p = sublinear(33);
  const EnergyContext ctx = p.family.with_lambda(0.5 * p.lambda_star);
  const TStar ts = t_star(ctx, p.eig.phi1);
  CHECK(j_lambda(ctx, ts.t * p.eig.phi1) == doctest::Approx(ts.j_min).epsilon(1e-12));
  for (double s : {0.9, 0.99, 1.01, 1.1}) CHECK(j_lambda(ctx, (s * ts.t) * p.eig.phi1) > ts.j_min);
}

TEST_CASE("Nehari residual at lambda = 0 against direct sums") {
  auto p = strong(40);
  std::mt19937_64 rng(26);
  const GridFunction u = random_positive(p.eig, rng);
  const Vector a = p.family.a();
  const double h = p.ops->grid->hx();
  double grad = 0.0, sing = 0.0;
  for (Eigen::Index k = 0; k <= u.size(); ++k) {
    const double l = k > 0 ? u[k - 1] : 0.0, r = k < u.size() ? u[k] : 0.0;
    grad += (r - l) * (r - l) / h;
  }
  for (Eigen::Index k = 0; k < u.size(); ++k) sing += h * a[k] * std::pow(u[k], -0.5);
  CHECK(nehari_residual(p.family, u) == doctest::Approx(grad - sing).epsilon(1e-12));
  GridFunction bad = u;
  bad[0] = 0.0;
  CHECK_THROWS_AS(nehari_residual(p.family, bad), std::domain_error);
}

TEST_CASE("Nehari residual is d/dt I(t u) at t = 1") {
  std::mt19937_64 rng(27);
  for (double gamma : {0.5, 1.0, 1.5}) {
    auto p = make_problem(gamma, gamma > 1 ? Weight::dist_pow(0.8) : Weight::constant(1),
                          Nonlinearity::affine(2, 0.5), 33);
    const EnergyContext ctx = p.family.with_lambda(0.3 * p.lambda_star);
    const GridFunction u = random_positive(p.eig, rng);
    const double h = 1e-6;
    const double d = (energy_value(ctx, (1 + h) * u) - energy_value(ctx, (1 - h) * u)) / (2 * h);
    CHECK(nehari_residual(ctx, u) == doctest::Approx(d).epsilon(1e-6));
  }
}
