#pragma once

#include <functional>
#include <vector>

#include "homog/fem_grid.hpp"
#include "homog/types.hpp"

namespace homog {

/// Box mesh for the homogenized problem, homogeneous Dirichlet boundary.
struct MacroMesh {
  int dimension = 1;
  Vector lengths;               // side lengths of the box; unit box if empty
  int cells_per_axis = 64;
  std::vector<double> time_samples; // defaults to {0} semantics: single slice

  void validate() const {
    if (dimension < 1 || dimension > 2) throw ValidationError("macro mesh: dimension in {1,2}");
    if (cells_per_axis < 2) throw ValidationError("macro mesh: cells_per_axis >= 2");
    if (lengths.size() && lengths.minCoeff() <= 0.0)
      throw ValidationError("macro mesh: degenerate box");
  }

  fem::Grid fem_grid() const {
    fem::Grid g;
    g.dim = dimension;
    g.cells = cells_per_axis;
    g.lengths = lengths;
    g.periodic = false;
    return g;
  }
};

/// Per-slice nodal solutions of -div(b grad u) = f(.,t); t is a parameter
/// (the limit problem carries no time derivative; the initial datum of the
/// fine-scale problem does not enter).
struct MacroSolution {
  MacroMesh mesh;
  std::vector<double> times;
  std::vector<Vector> values;    // nodal values, zero on the boundary
  std::vector<double> residuals;

  /// P1/Q1 interpolation in space and linear interpolation in time
  /// (constant extrapolation outside the sample range).
  double at(const Vector& x, double t) const;
};

/// Solve the homogenized elliptic problem per time sample. Refuses a
/// non-coercive tensor with an eigenvalue report.
MacroSolution solve_homogenized(const Matrix& b,
                                const std::function<double(const Vector&, double)>& source,
                                const MacroMesh& mesh, double tol);

/// Space interpolation of a nodal field on a (Dirichlet or periodic) grid.
double interpolate_nodal(const fem::Grid& grid, const Vector& nodal, const Vector& x);

} // namespace homog
