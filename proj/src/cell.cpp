#include "homog/cell.hpp"

#include <memory>
#include <sstream>

namespace homog {

CellCorrector solve_elliptic_cell(const SpatialCoefficient& coefficient, int dimension,
                                  int direction, const CellGrid& grid, double tol) {
  grid.validate();
  if (dimension != grid.dimension) throw ValidationError("elliptic cell: dimension mismatch");
  if (direction < 0 || direction >= dimension)
    throw ValidationError("elliptic cell: direction out of range");
  if (tol <= 0.0) throw ValidationError("elliptic cell: tol must be positive");

  fem::Grid g = grid.fem_grid();
  fem::ElementKernel kernel(g);
  auto sys = fem::assemble_stiffness(g, kernel, coefficient);
  Vector load = fem::assemble_direction_load(g, kernel, sys.cell_coefficients, direction);

  CellCorrector out;
  out.direction = direction;
  // The periodic operator is singular with constant kernel; pinning one node
  // selects a particular solution, the mean is removed afterwards.
  out.values = fem::solve_pinned(sys.stiffness, load, {0}, tol, "elliptic cell",
                                 &out.residual_norm);
  out.values.array() -= fem::nodal_mean(g, out.values);
  out.flux = fem::mean_flux(g, kernel, sys.cell_coefficients, out.values, direction);
  return out;
}

CellCorrector solve_periodic_parabolic_cell(const SpaceTimeCoefficient& coefficient,
                                            int dimension, int direction, const CellGrid& grid,
                                            double tol) {
  grid.validate();
  if (dimension != grid.dimension) throw ValidationError("parabolic cell: dimension mismatch");
  if (direction < 0 || direction >= dimension)
    throw ValidationError("parabolic cell: direction out of range");
  if (tol <= 0.0) throw ValidationError("parabolic cell: tol must be positive");

  fem::Grid g = grid.fem_grid();
  fem::ElementKernel kernel(g);
  fem::SparseMatrix mass = fem::assemble_mass(g, kernel);
  const int steps = grid.time_steps;
  const double ds = 1.0 / steps;
  const int nn = g.node_count();

  // Implicit Euler step m advances from s = m*ds to (m+1)*ds with the
  // coefficient frozen at the step's endpoint. Factorizations are reused
  // across sweeps.
  struct Step {
    std::unique_ptr<fem::PinnedSolver> solver;
    fem::SparseMatrix system;
    Vector load;
    std::vector<Matrix> cell_coefficients;
  };
  std::vector<Step> plan(steps);
  fem::SparseMatrix mass_over_ds = mass / ds;
  for (int m = 0; m < steps; ++m) {
    double s = (m + 1) * ds;
    auto sys = fem::assemble_stiffness(
        g, kernel, [&](const Vector& y) { return coefficient(y, s); });
    plan[m].system = mass_over_ds + sys.stiffness;
    plan[m].solver = std::make_unique<fem::PinnedSolver>(plan[m].system, std::vector<int>{},
                                                         "parabolic cell step");
    plan[m].load =
        fem::assemble_direction_load(g, kernel, sys.cell_coefficients, direction);
    plan[m].cell_coefficients = std::move(sys.cell_coefficients);
  }

  const int max_sweeps = 500;
  Vector w = Vector::Zero(nn);
  std::vector<double> defects;
  bool converged = false;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    Vector start = w;
    for (int m = 0; m < steps; ++m) w = plan[m].solver->solve(mass_over_ds * w + plan[m].load);
    double defect = fem::l2_norm(mass, w - start);
    double scale = fem::l2_norm(mass, w) + 1.0;
    defects.push_back(defect);
    if (defect <= tol * scale) {
      converged = true;
      break;
    }
    if (defects.size() >= 11 &&
        defects.back() > 0.9 * defects[defects.size() - 11]) {
      std::ostringstream os;
      os << "parabolic cell: period-map fixed point stagnated; defect history:";
      for (double d : defects) os << " " << d;
      throw SolverError(os.str());
    }
  }
  if (!converged)
    throw SolverError("parabolic cell: period map did not reach tolerance within 500 sweeps");

  CellCorrector out;
  out.direction = direction;
  out.periodicity_defect = defects.empty() ? 0.0 : defects.back();
  out.slices.reserve(steps);
  out.slice_fluxes.reserve(steps);
  Vector w_prev = w; // periodic starting state
  double worst_residual = 0.0;
  for (int m = 0; m < steps; ++m) {
    Vector rhs = mass_over_ds * w + plan[m].load;
    w = plan[m].solver->solve(rhs);
    double rel = (plan[m].system * w - rhs).norm() / std::max(rhs.norm(), 1e-14);
    worst_residual = std::max(worst_residual, rel);
    Vector slice = w;
    slice.array() -= fem::nodal_mean(g, slice);
    out.slices.push_back(slice);
    out.slice_fluxes.push_back(
        fem::mean_flux(g, kernel, plan[m].cell_coefficients, slice, direction));
  }
  out.residual_norm = worst_residual;
  out.values = out.slices.back();
  out.flux = Vector::Zero(dimension);
  for (const Vector& f : out.slice_fluxes) out.flux += f;
  out.flux /= steps;
  (void)w_prev;
  return out;
}

Matrix cell_flux_tensor(const std::vector<CellCorrector>& correctors) {
  if (correctors.empty()) throw ValidationError("cell_flux_tensor: no correctors");
  int n = static_cast<int>(correctors[0].flux.size());
  if (static_cast<int>(correctors.size()) != n)
    throw ValidationError("cell_flux_tensor: need one corrector per coordinate direction");
  Matrix b(n, n);
  for (int j = 0; j < n; ++j) {
    if (correctors[j].direction != j)
      throw ValidationError("cell_flux_tensor: correctors out of order");
    b.col(j) = correctors[j].flux;
  }
  return b;
}

} // namespace homog
