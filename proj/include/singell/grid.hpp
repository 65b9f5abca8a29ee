// Discrete domains, Dirichlet Laplacian and nodal quadrature on uniform grids.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace singell {

struct Domain {
  enum class Kind { Interval, Rectangle };

  Kind kind = Kind::Interval;
  // Interval: [lo, hi]. Rectangle: [0, lx] x [0, ly], stored in (lo, hi) = (lx, ly).
  double lo = 0.0;
  double hi = 1.0;

  static Domain interval(double lo, double hi) {
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi))
      throw std::invalid_argument("interval domain requires hi > lo");
    return Domain{Kind::Interval, lo, hi};
  }

  static Domain rectangle(double lx, double ly) {
    if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly))
      throw std::invalid_argument("rectangle domain requires lx > 0 and ly > 0");
    return Domain{Kind::Rectangle, lx, ly};
  }

  int dim() const { return kind == Kind::Interval ? 1 : 2; }
  double lx() const { return kind == Kind::Interval ? hi - lo : lo; }
  double ly() const { return kind == Kind::Interval ? 0.0 : hi; }

  double measure() const { return kind == Kind::Interval ? hi - lo : lo * hi; }

  friend bool operator==(const Domain&, const Domain&) = default;
};

/// Uniform grid of n interior nodes per axis; interior nodes are numbered
/// lexicographically with x running fastest.
template <typename Scalar = double>
class BasicGrid {
 public:
  BasicGrid(Domain domain, int n) : domain_(domain), n_(n) {
    if (n < 3) throw std::invalid_argument("grid needs at least 3 interior nodes per axis, got " + std::to_string(n));
    if (domain.kind == Domain::Kind::Interval) {
      if (!(domain.hi > domain.lo)) throw std::invalid_argument("degenerate interval");
      hx_ = Scalar(domain.hi - domain.lo) / Scalar(n + 1);
      hy_ = Scalar(0);
    } else {
      if (!(domain.lo > 0.0) || !(domain.hi > 0.0)) throw std::invalid_argument("degenerate rectangle");
      hx_ = Scalar(domain.lo) / Scalar(n + 1);
      hy_ = Scalar(domain.hi) / Scalar(n + 1);
    }
  }

  const Domain& domain() const { return domain_; }
  int n() const { return n_; }
  int dim() const { return domain_.dim(); }
  Eigen::Index size() const { return dim() == 1 ? Eigen::Index(n_) : Eigen::Index(n_) * n_; }
  Scalar hx() const { return hx_; }
  Scalar hy() const { return hy_; }
  Scalar h() const { return hx_; }

  /// Axis indices (i, j) of interior node k; j = 0 in 1D.
  std::pair<int, int> axes(Eigen::Index k) const {
    if (dim() == 1) return {int(k), 0};
    return {int(k % n_), int(k / n_)};
  }

  Eigen::Index index(int i, int j = 0) const { return dim() == 1 ? Eigen::Index(i) : Eigen::Index(j) * n_ + i; }

  /// Physical coordinates of interior node k (y = 0 in 1D).
  std::pair<Scalar, Scalar> coord(Eigen::Index k) const {
    auto [i, j] = axes(k);
    if (dim() == 1) return {Scalar(domain_.lo) + Scalar(i + 1) * hx_, Scalar(0)};
    return {Scalar(i + 1) * hx_, Scalar(j + 1) * hy_};
  }

  friend bool operator==(const BasicGrid& a, const BasicGrid& b) {
    return a.domain_ == b.domain_ && a.n_ == b.n_;
  }

 private:
  Domain domain_;
  int n_;
  Scalar hx_;
  Scalar hy_;
};

template <typename Scalar = double>
using GridPtr = std::shared_ptr<const BasicGrid<Scalar>>;

template <typename Scalar = double>
GridPtr<Scalar> build_grid(Domain domain, int n) {
  return std::make_shared<const BasicGrid<Scalar>>(domain, n);
}

/// Nodal values on the interior nodes of a grid; boundary values are zero.
template <typename Scalar = double>
class BasicGridFunction {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit BasicGridFunction(GridPtr<Scalar> grid) : grid_(std::move(grid)), values_(Vector::Zero(grid_->size())) {}

  BasicGridFunction(GridPtr<Scalar> grid, Vector values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_->size())
      throw std::invalid_argument("grid function has " + std::to_string(values_.size()) + " values, grid has " +
                                  std::to_string(grid_->size()) + " interior nodes");
  }

  template <typename Fn>
  static BasicGridFunction sample(GridPtr<Scalar> grid, Fn&& fn) {
    Vector v(grid->size());
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      auto [x, y] = grid->coord(k);
      if constexpr (std::is_invocable_v<Fn, Scalar, Scalar>)
        v[k] = fn(x, y);
      else
        v[k] = fn(x);
    }
    return BasicGridFunction(std::move(grid), std::move(v));
  }

  static BasicGridFunction constant(GridPtr<Scalar> grid, Scalar c) {
    Vector v = Vector::Constant(grid->size(), c);
    return BasicGridFunction(std::move(grid), std::move(v));
  }

  const BasicGrid<Scalar>& grid() const { return *grid_; }
  const GridPtr<Scalar>& grid_ptr() const { return grid_; }
  const Vector& values() const { return values_; }
  Vector& values() { return values_; }
  Eigen::Index size() const { return values_.size(); }
  Scalar operator[](Eigen::Index k) const { return values_[k]; }
  Scalar& operator[](Eigen::Index k) { return values_[k]; }

  bool same_grid(const BasicGrid<Scalar>& other) const { return grid_.get() == &other || *grid_ == other; }

  BasicGridFunction& operator+=(const BasicGridFunction& o) {
    require_same(o);
    values_ += o.values_;
    return *this;
  }
  BasicGridFunction& operator-=(const BasicGridFunction& o) {
    require_same(o);
    values_ -= o.values_;
    return *this;
  }
  BasicGridFunction& operator*=(Scalar s) {
    values_ *= s;
    return *this;
  }

  friend BasicGridFunction operator+(BasicGridFunction a, const BasicGridFunction& b) { return a += b; }
  friend BasicGridFunction operator-(BasicGridFunction a, const BasicGridFunction& b) { return a -= b; }
  friend BasicGridFunction operator*(Scalar s, BasicGridFunction a) { return a *= s; }
  friend BasicGridFunction operator*(BasicGridFunction a, Scalar s) { return a *= s; }

  friend BasicGridFunction max(const BasicGridFunction& a, const BasicGridFunction& b) {
    a.require_same(b);
    return BasicGridFunction(a.grid_, a.values_.cwiseMax(b.values_));
  }

  friend BasicGridFunction abs(const BasicGridFunction& a) { return BasicGridFunction(a.grid_, a.values_.cwiseAbs()); }

  void require_same(const BasicGridFunction& o) const { require_grid(o.grid()); }
  void require_grid(const BasicGrid<Scalar>& g) const {
    if (!same_grid(g)) throw std::invalid_argument("grid mismatch between grid functions");
  }

 private:
  GridPtr<Scalar> grid_;
  Vector values_;
};

/// Stiffness A with u^T A v ~ int grad u . grad v, and nodal quadrature weights w with w^T g ~ int g.
template <typename Scalar = double>
struct BasicOperators {
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Sparse = Eigen::SparseMatrix<Scalar>;

  GridPtr<Scalar> grid;
  Sparse stiffness;
  Vector quad;
};

template <typename Scalar = double>
using OperatorsPtr = std::shared_ptr<const BasicOperators<Scalar>>;

/// 3-point (1D) or 5-point (2D) Dirichlet Laplacian scaled by the cell measure,
/// together with trapezoid weights (boundary nodes carry zero values).
template <typename Scalar = double>
OperatorsPtr<Scalar> assemble_operators(GridPtr<Scalar> grid) {
  using Triplet = Eigen::Triplet<Scalar>;
  using Vector = typename BasicOperators<Scalar>::Vector;
  const auto m = grid->size();
  const int n = grid->n();
  std::vector<Triplet> trips;
  auto ops = std::make_shared<BasicOperators<Scalar>>();
  ops->grid = grid;

  if (grid->dim() == 1) {
    const Scalar h = grid->hx();
    trips.reserve(std::size_t(3 * m));
    for (Eigen::Index k = 0; k < m; ++k) {
      trips.emplace_back(k, k, Scalar(2) / h);
      if (k > 0) trips.emplace_back(k, k - 1, Scalar(-1) / h);
      if (k + 1 < m) trips.emplace_back(k, k + 1, Scalar(-1) / h);
    }
    ops->quad = Vector::Constant(m, h);
  } else {
    const Scalar hx = grid->hx();
    const Scalar hy = grid->hy();
    const Scalar cx = hy / hx;
    const Scalar cy = hx / hy;
    trips.reserve(std::size_t(5 * m));
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const auto k = grid->index(i, j);
        trips.emplace_back(k, k, Scalar(2) * (cx + cy));
        if (i > 0) trips.emplace_back(k, grid->index(i - 1, j), -cx);
        if (i + 1 < n) trips.emplace_back(k, grid->index(i + 1, j), -cx);
        if (j > 0) trips.emplace_back(k, grid->index(i, j - 1), -cy);
        if (j + 1 < n) trips.emplace_back(k, grid->index(i, j + 1), -cy);
      }
    }
    ops->quad = Vector::Constant(m, hx * hy);
  }
  ops->stiffness.resize(m, m);
  ops->stiffness.setFromTriplets(trips.begin(), trips.end());
  ops->stiffness.makeCompressed();
  return ops;
}

template <typename Scalar>
void require_on(const BasicOperators<Scalar>& ops, const BasicGridFunction<Scalar>& u) {
  u.require_grid(*ops.grid);
}

template <typename Scalar>
Scalar h1_norm_squared(const BasicOperators<Scalar>& ops, const BasicGridFunction<Scalar>& u) {
  require_on(ops, u);
  return u.values().dot(ops.stiffness * u.values());
}

/// Discrete H^1_0 norm sqrt(u^T A u).
template <typename Scalar>
Scalar h1_norm(const BasicOperators<Scalar>& ops, const BasicGridFunction<Scalar>& u) {
  using std::sqrt;
  return sqrt(std::max(Scalar(0), h1_norm_squared(ops, u)));
}

template <typename Scalar>
Scalar integrate(const BasicOperators<Scalar>& ops, const BasicGridFunction<Scalar>& g) {
  require_on(ops, g);
  return ops.quad.dot(g.values());
}

/// Distance from each interior node to the boundary of the (product) domain.
template <typename Scalar>
BasicGridFunction<Scalar> boundary_distance(const GridPtr<Scalar>& grid) {
  const Domain& d = grid->domain();
  if (d.kind == Domain::Kind::Interval) {
    const Scalar lo(d.lo), hi(d.hi);
    return BasicGridFunction<Scalar>::sample(grid, [&](Scalar x) { return std::min(x - lo, hi - x); });
  }
  const Scalar lx(d.lo), ly(d.hi);
  return BasicGridFunction<Scalar>::sample(
      grid, [&](Scalar x, Scalar y) { return std::min(std::min(x, lx - x), std::min(y, ly - y)); });
}

using Grid = BasicGrid<double>;
using GridFunction = BasicGridFunction<double>;
using Operators = BasicOperators<double>;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

}  // namespace singell
