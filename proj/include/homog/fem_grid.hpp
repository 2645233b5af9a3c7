#pragma once

#include <Eigen/Sparse>
#include <array>
#include <functional>
#include <vector>

#include "homog/types.hpp"

namespace homog::fem {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Uniform tensor grid on an axis-aligned box, order-1 elements
/// (P1 segments in 1D, Q1 quadrilaterals in 2D). Periodic grids identify
/// opposite faces, so the node count equals the cell count per axis.
struct Grid {
  int dim = 1;
  int cells = 8;       // cells per axis
  Vector lengths;      // box side lengths; unit box if empty
  bool periodic = true;

  double length(int axis) const { return lengths.size() ? lengths[axis] : 1.0; }
  double h(int axis) const { return length(axis) / cells; }
  int nodes_per_axis() const { return periodic ? cells : cells + 1; }
  int node_count() const {
    int n = nodes_per_axis();
    return dim == 1 ? n : n * n;
  }
  int cell_count() const { return dim == 1 ? cells : cells * cells; }
  double cell_volume() const { return dim == 1 ? h(0) : h(0) * h(1); }

  Vector cell_center(int e) const {
    Vector c(dim);
    if (dim == 1) {
      c[0] = (e + 0.5) * h(0);
    } else {
      c[0] = (e % cells + 0.5) * h(0);
      c[1] = (e / cells + 0.5) * h(1);
    }
    return c;
  }

  Vector node_coord(int i) const {
    Vector c(dim);
    int n = nodes_per_axis();
    if (dim == 1) {
      c[0] = i * h(0);
    } else {
      c[0] = (i % n) * h(0);
      c[1] = (i / n) * h(1);
    }
    return c;
  }

  /// Global node indices of cell e, in local order
  /// (0,0), (1,0), (0,1), (1,1) (first two entries in 1D).
  std::array<int, 4> cell_nodes(int e) const {
    std::array<int, 4> out{0, 0, 0, 0};
    int n = nodes_per_axis();
    if (dim == 1) {
      int i = e;
      out[0] = i;
      out[1] = periodic ? (i + 1) % n : i + 1;
    } else {
      int i = e % cells, j = e / cells;
      int ip = periodic ? (i + 1) % n : i + 1;
      int jp = periodic ? (j + 1) % n : j + 1;
      out[0] = i + n * j;
      out[1] = ip + n * j;
      out[2] = i + n * jp;
      out[3] = ip + n * jp;
    }
    return out;
  }

  bool is_boundary_node(int i) const {
    if (periodic) return false;
    int n = nodes_per_axis();
    if (dim == 1) return i == 0 || i == n - 1;
    int ix = i % n, iy = i / n;
    return ix == 0 || ix == n - 1 || iy == 0 || iy == n - 1;
  }

  int local_nodes() const { return dim == 1 ? 2 : 4; }
};

/// Per-cell stiffness and direction-load contraction against a constant
/// matrix coefficient on the cell, integrated exactly (2-point Gauss per
/// axis for Q1). All cells are congruent, so the reference contractions are
/// computed once.
struct ElementKernel {
  explicit ElementKernel(const Grid& grid);

  /// K_ab = int_cell (A grad(phi_b)) . grad(phi_a)
  Matrix stiffness(const Matrix& a) const;
  /// F_a = -int_cell (A e_j) . grad(phi_a)
  Vector direction_load(const Matrix& a, int direction) const;
  /// M_ab = int_cell phi_a phi_b (consistent mass)
  const Matrix& mass() const { return mass_; }
  /// int_cell grad(phi_a) (vector per local node), for flux averages
  const std::vector<Vector>& grad_integrals() const { return grad_integrals_; }

  int local_nodes() const { return nloc_; }

private:
  int dim_, nloc_;
  double volume_;
  // grad_outer_[a][b] = int grad(phi_a) grad(phi_b)^T, a dim x dim matrix.
  std::vector<std::vector<Matrix>> grad_outer_;
  std::vector<Vector> grad_integrals_;
  Matrix mass_;
};

struct AssembledSystem {
  SparseMatrix stiffness;                 // full (possibly singular) operator
  std::vector<Matrix> cell_coefficients;  // coefficient at each cell center
};

/// Assemble the stiffness operator for coefficient(cell center).
AssembledSystem assemble_stiffness(const Grid& grid, const ElementKernel& kernel,
                                   const std::function<Matrix(const Vector&)>& coefficient,
                                   double required_coercivity = 0.0);

/// Assemble the load vector F_i = -int (A e_j) . grad(phi_i).
Vector assemble_direction_load(const Grid& grid, const ElementKernel& kernel,
                               const std::vector<Matrix>& cell_coefficients, int direction);

/// Assemble F_i = int f phi_i with 2-point Gauss per axis.
Vector assemble_source_load(const Grid& grid, const std::function<double(const Vector&)>& f);

/// Consistent mass matrix.
SparseMatrix assemble_mass(const Grid& grid, const ElementKernel& kernel);

/// Flux integral int_cell A (e_j + grad w) summed over cells, divided by the
/// domain volume (so a unit cell yields the plain integral).
Vector mean_flux(const Grid& grid, const ElementKernel& kernel,
                 const std::vector<Matrix>& cell_coefficients, const Vector& w, int direction);

/// L2 norm over the grid via the consistent mass, sqrt(w^T M w).
double l2_norm(const SparseMatrix& mass, const Vector& w);

/// Volume-weighted mean of a nodal field (uniform grids: arithmetic mean).
double nodal_mean(const Grid& grid, const Vector& w);

/// Direct sparse solve with rows in `pinned` replaced by identity equations
/// w_i = 0. Checks the residual of the *original* system against tol and
/// throws SolverError on failure. Returns the solution.
Vector solve_pinned(const SparseMatrix& full, const Vector& rhs, const std::vector<int>& pinned,
                    double tol, const char* what, double* residual_out = nullptr);

/// Reusable factorization of a pinned sparse system (for repeated
/// time-stepping solves with the same matrix).
class PinnedSolver {
public:
  PinnedSolver(const SparseMatrix& full, const std::vector<int>& pinned, const char* what);
  Vector solve(const Vector& rhs) const; // pinned entries of rhs are ignored

private:
  Eigen::SparseLU<SparseMatrix> lu_;
  std::vector<char> pinned_mask_;
};

} // namespace homog::fem
