#include "homog/fem_grid.hpp"

#include <Eigen/SparseLU>
#include <sstream>

namespace homog::fem {
namespace {

// 2-point Gauss on [0,1].
constexpr double kGaussA = 0.21132486540518711775; // (3 - sqrt(3)) / 6
constexpr double kGaussB = 1.0 - kGaussA;

double shape1(double xi, int a) { return a == 0 ? 1.0 - xi : xi; }
double dshape1(int a) { return a == 0 ? -1.0 : 1.0; }

} // namespace

ElementKernel::ElementKernel(const Grid& grid) : dim_(grid.dim), nloc_(grid.local_nodes()) {
  volume_ = grid.cell_volume();
  grad_outer_.assign(nloc_, std::vector<Matrix>(nloc_, Matrix::Zero(dim_, dim_)));
  grad_integrals_.assign(nloc_, Vector::Zero(dim_));
  mass_ = Matrix::Zero(nloc_, nloc_);

  if (dim_ == 1) {
    double h = grid.h(0);
    for (int a = 0; a < 2; ++a) {
      double ga = dshape1(a) / h;
      grad_integrals_[a][0] = ga * h;
      for (int b = 0; b < 2; ++b) grad_outer_[a][b](0, 0) = ga * (dshape1(b) / h) * h;
    }
    mass_ << 2, 1, 1, 2;
    mass_ *= h / 6.0;
    return;
  }

  double hx = grid.h(0), hy = grid.h(1);
  const double pts[2] = {kGaussA, kGaussB};
  auto local_ij = [](int a) { return std::pair<int, int>(a % 2, a / 2); };
  for (int gx = 0; gx < 2; ++gx) {
    for (int gy = 0; gy < 2; ++gy) {
      double xi = pts[gx], eta = pts[gy];
      double w = 0.25 * volume_;
      std::array<double, 4> phi;
      std::array<Vector, 4> grad;
      for (int a = 0; a < 4; ++a) {
        auto [i, j] = local_ij(a);
        phi[a] = shape1(xi, i) * shape1(eta, j);
        Vector g(2);
        g << dshape1(i) * shape1(eta, j) / hx, shape1(xi, i) * dshape1(j) / hy;
        grad[a] = g;
      }
      for (int a = 0; a < 4; ++a) {
        grad_integrals_[a] += w * grad[a];
        for (int b = 0; b < 4; ++b) {
          grad_outer_[a][b] += w * grad[a] * grad[b].transpose();
          mass_(a, b) += w * phi[a] * phi[b];
        }
      }
    }
  }
}

Matrix ElementKernel::stiffness(const Matrix& a) const {
  Matrix k(nloc_, nloc_);
  for (int i = 0; i < nloc_; ++i)
    for (int j = 0; j < nloc_; ++j) k(i, j) = a.cwiseProduct(grad_outer_[i][j]).sum();
  return k;
}

Vector ElementKernel::direction_load(const Matrix& a, int direction) const {
  Vector f(nloc_);
  for (int i = 0; i < nloc_; ++i) f[i] = -a.col(direction).dot(grad_integrals_[i]);
  return f;
}

AssembledSystem assemble_stiffness(const Grid& grid, const ElementKernel& kernel,
                                   const std::function<Matrix(const Vector&)>& coefficient,
                                   double required_coercivity) {
  AssembledSystem sys;
  int nn = grid.node_count();
  std::vector<Triplet> trips;
  trips.reserve(static_cast<size_t>(grid.cell_count()) * kernel.local_nodes() *
                kernel.local_nodes());
  sys.cell_coefficients.reserve(grid.cell_count());
  for (int e = 0; e < grid.cell_count(); ++e) {
    Matrix a = coefficient(grid.cell_center(e));
    if (min_symmetric_eigenvalue(a) <= required_coercivity) {
      std::ostringstream os;
      os << "non-coercive coefficient at cell center (" << grid.cell_center(e).transpose() << ")";
      throw ValidationError(os.str());
    }
    sys.cell_coefficients.push_back(a);
    Matrix ke = kernel.stiffness(a);
    auto nodes = grid.cell_nodes(e);
    for (int i = 0; i < kernel.local_nodes(); ++i)
      for (int j = 0; j < kernel.local_nodes(); ++j)
        trips.emplace_back(nodes[i], nodes[j], ke(i, j));
  }
  sys.stiffness.resize(nn, nn);
  sys.stiffness.setFromTriplets(trips.begin(), trips.end());
  return sys;
}

Vector assemble_direction_load(const Grid& grid, const ElementKernel& kernel,
                               const std::vector<Matrix>& cell_coefficients, int direction) {
  Vector f = Vector::Zero(grid.node_count());
  for (int e = 0; e < grid.cell_count(); ++e) {
    Vector fe = kernel.direction_load(cell_coefficients[e], direction);
    auto nodes = grid.cell_nodes(e);
    for (int i = 0; i < kernel.local_nodes(); ++i) f[nodes[i]] += fe[i];
  }
  return f;
}

Vector assemble_source_load(const Grid& grid, const std::function<double(const Vector&)>& f) {
  Vector load = Vector::Zero(grid.node_count());
  const double pts[2] = {kGaussA, kGaussB};
  double vol = grid.cell_volume();
  if (grid.dim == 1) {
    for (int e = 0; e < grid.cell_count(); ++e) {
      auto nodes = grid.cell_nodes(e);
      double x0 = e * grid.h(0);
      for (int g = 0; g < 2; ++g) {
        Vector x(1);
        x[0] = x0 + pts[g] * grid.h(0);
        double fx = f(x);
        for (int a = 0; a < 2; ++a) load[nodes[a]] += 0.5 * vol * fx * shape1(pts[g], a);
      }
    }
    return load;
  }
  for (int e = 0; e < grid.cell_count(); ++e) {
    auto nodes = grid.cell_nodes(e);
    int ex = e % grid.cells, ey = e / grid.cells;
    for (int gx = 0; gx < 2; ++gx) {
      for (int gy = 0; gy < 2; ++gy) {
        Vector x(2);
        x << (ex + pts[gx]) * grid.h(0), (ey + pts[gy]) * grid.h(1);
        double fx = f(x);
        for (int a = 0; a < 4; ++a) {
          double phi = shape1(pts[gx], a % 2) * shape1(pts[gy], a / 2);
          load[nodes[a]] += 0.25 * vol * fx * phi;
        }
      }
    }
  }
  return load;
}

SparseMatrix assemble_mass(const Grid& grid, const ElementKernel& kernel) {
  int nn = grid.node_count();
  std::vector<Triplet> trips;
  const Matrix& me = kernel.mass();
  for (int e = 0; e < grid.cell_count(); ++e) {
    auto nodes = grid.cell_nodes(e);
    for (int i = 0; i < kernel.local_nodes(); ++i)
      for (int j = 0; j < kernel.local_nodes(); ++j)
        trips.emplace_back(nodes[i], nodes[j], me(i, j));
  }
  SparseMatrix m(nn, nn);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

Vector mean_flux(const Grid& grid, const ElementKernel& kernel,
                 const std::vector<Matrix>& cell_coefficients, const Vector& w, int direction) {
  Vector flux = Vector::Zero(grid.dim);
  double vol = grid.cell_volume();
  for (int e = 0; e < grid.cell_count(); ++e) {
    const Matrix& a = cell_coefficients[e];
    auto nodes = grid.cell_nodes(e);
    Vector grad_int = Vector::Zero(grid.dim); // int_cell grad w
    for (int i = 0; i < kernel.local_nodes(); ++i)
      grad_int += w[nodes[i]] * kernel.grad_integrals()[i];
    flux += vol * a.col(direction) + a * grad_int;
  }
  double domain = 1.0;
  for (int d = 0; d < grid.dim; ++d) domain *= grid.length(d);
  return flux / domain;
}

double l2_norm(const SparseMatrix& mass, const Vector& w) {
  return std::sqrt(std::max(0.0, w.dot(mass * w)));
}

double nodal_mean(const Grid& grid, const Vector& w) {
  // Uniform periodic grid: consistent-mass row sums are all equal.
  if (grid.periodic) return w.mean();
  // Dirichlet grids: trapezoidal weights.
  int n = grid.nodes_per_axis();
  double total = 0.0, wsum = 0.0;
  for (int i = 0; i < grid.node_count(); ++i) {
    double wt = 1.0;
    if (grid.dim == 1) {
      wt = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    } else {
      int ix = i % n, iy = i / n;
      wt = ((ix == 0 || ix == n - 1) ? 0.5 : 1.0) * ((iy == 0 || iy == n - 1) ? 0.5 : 1.0);
    }
    total += wt * w[i];
    wsum += wt;
  }
  return total / wsum;
}

namespace {

SparseMatrix pin_rows(const SparseMatrix& full, const std::vector<char>& mask) {
  std::vector<Triplet> trips;
  trips.reserve(static_cast<size_t>(full.nonZeros()) + mask.size());
  for (int k = 0; k < full.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(full, k); it; ++it) {
      if (!mask[it.row()]) trips.emplace_back(it.row(), it.col(), it.value());
    }
  }
  for (size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) trips.emplace_back(static_cast<int>(i), static_cast<int>(i), 1.0);
  SparseMatrix pinned(full.rows(), full.cols());
  pinned.setFromTriplets(trips.begin(), trips.end());
  return pinned;
}

} // namespace

PinnedSolver::PinnedSolver(const SparseMatrix& full, const std::vector<int>& pinned,
                           const char* what) {
  pinned_mask_.assign(full.rows(), 0);
  for (int i : pinned) pinned_mask_[i] = 1;
  SparseMatrix sys = pin_rows(full, pinned_mask_);
  lu_.compute(sys);
  if (lu_.info() != Eigen::Success)
    throw SolverError(std::string(what) + ": sparse factorization failed");
}

Vector PinnedSolver::solve(const Vector& rhs) const {
  Vector b = rhs;
  for (size_t i = 0; i < pinned_mask_.size(); ++i)
    if (pinned_mask_[i]) b[i] = 0.0;
  Vector x = lu_.solve(b);
  return x;
}

Vector solve_pinned(const SparseMatrix& full, const Vector& rhs, const std::vector<int>& pinned,
                    double tol, const char* what, double* residual_out) {
  PinnedSolver solver(full, pinned, what);
  Vector x = solver.solve(rhs);
  // Residual of the original system over the free rows.
  Vector r = full * x - rhs;
  std::vector<char> mask(full.rows(), 0);
  for (int i : pinned) mask[i] = 1;
  double rn = 0.0, bn = 0.0;
  for (int i = 0; i < r.size(); ++i) {
    if (mask[i]) continue;
    rn += r[i] * r[i];
    bn += rhs[i] * rhs[i];
  }
  rn = std::sqrt(rn);
  bn = std::sqrt(bn);
  double rel = rn / std::max(bn, 1e-14);
  if (residual_out) *residual_out = rel;
  if (rel > tol)
    throw SolverError(std::string(what) + ": linear solve residual " + std::to_string(rel) +
                      " exceeds tolerance " + std::to_string(tol));
  return x;
}

} // namespace homog::fem
