#pragma once

#include <functional>
#include <vector>

#include "homog/fem_grid.hpp"
#include "homog/types.hpp"

namespace homog {

/// Discretization of the unit cell Y (and the time period S for parabolic
/// problems). Order-1 elements with periodic identification of opposite
/// faces; nodes_per_axis counts nodes after identification.
struct CellGrid {
  int dimension = 1;       // N in {1,2}
  int nodes_per_axis = 16; // >= 4
  int time_steps = 16;     // >= 4, parabolic only

  void validate() const {
    if (dimension < 1 || dimension > 2) throw ValidationError("cell grid: dimension in {1,2}");
    if (nodes_per_axis < 4) throw ValidationError("cell grid: nodes_per_axis >= 4");
    if (time_steps < 4) throw ValidationError("cell grid: time_steps >= 4");
  }

  fem::Grid fem_grid() const {
    fem::Grid g;
    g.dim = dimension;
    g.cells = nodes_per_axis;
    g.periodic = true;
    return g;
  }
};

using SpatialCoefficient = std::function<Matrix(const Vector& y)>;
using SpaceTimeCoefficient = std::function<Matrix(const Vector& y, double s)>;

/// Mean-zero corrector for one forcing direction, with its flux column.
struct CellCorrector {
  int direction = 0;
  Vector values;                    // elliptic: nodal values; parabolic: last slice
  std::vector<Vector> slices;       // parabolic: nodal values at s = (m+1)/M, m=0..M-1
  Vector flux;                      // int A (e_j + grad w); time-averaged if parabolic
  std::vector<Vector> slice_fluxes; // parabolic only
  double residual_norm = 0.0;
  double periodicity_defect = 0.0;  // parabolic: ||w(.,1) - w(.,0)||_L2
};

/// Solve -div_y(A(y)(e_j + grad_y w)) = 0 on Y, periodic, mean zero.
CellCorrector solve_elliptic_cell(const SpatialCoefficient& coefficient, int dimension,
                                  int direction, const CellGrid& grid, double tol);

/// Solve d_s w - div_y(A(y,s)(e_j + grad_y w)) = 0, periodic in y and s,
/// mean zero in y at every slice. Implicit Euler sweeps composed into a
/// period map and iterated to a fixed point.
CellCorrector solve_periodic_parabolic_cell(const SpaceTimeCoefficient& coefficient,
                                            int dimension, int direction, const CellGrid& grid,
                                            double tol);

/// Assemble the N x N flux tensor whose column j is correctors[j].flux.
/// Requires one corrector per coordinate direction, in order.
Matrix cell_flux_tensor(const std::vector<CellCorrector>& correctors);

} // namespace homog
