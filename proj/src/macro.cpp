#include "homog/macro.hpp"

#include <sstream>

namespace homog {

double interpolate_nodal(const fem::Grid& grid, const Vector& nodal, const Vector& x) {
  int n_nodes = grid.nodes_per_axis();
  auto locate = [&](int axis, double u) {
    double local = u / grid.h(axis);
    if (grid.periodic) local = wrap_unit(u / grid.length(axis)) * grid.cells;
    int c = static_cast<int>(std::floor(local));
    c = std::min(std::max(c, 0), grid.cells - 1);
    return std::pair<int, double>(c, local - c);
  };
  if (grid.dim == 1) {
    auto [c, xi] = locate(0, x[0]);
    int i0 = c, i1 = grid.periodic ? (c + 1) % n_nodes : c + 1;
    return (1.0 - xi) * nodal[i0] + xi * nodal[i1];
  }
  auto [cx, xi] = locate(0, x[0]);
  auto [cy, eta] = locate(1, x[1]);
  int ix1 = grid.periodic ? (cx + 1) % n_nodes : cx + 1;
  int iy1 = grid.periodic ? (cy + 1) % n_nodes : cy + 1;
  auto id = [&](int i, int j) { return i + n_nodes * j; };
  return (1.0 - xi) * (1.0 - eta) * nodal[id(cx, cy)] + xi * (1.0 - eta) * nodal[id(ix1, cy)] +
         (1.0 - xi) * eta * nodal[id(cx, iy1)] + xi * eta * nodal[id(ix1, iy1)];
}

double MacroSolution::at(const Vector& x, double t) const {
  fem::Grid g = mesh.fem_grid();
  if (values.size() == 1) return interpolate_nodal(g, values[0], x);
  // locate t in the sample list (assumed increasing)
  if (t <= times.front()) return interpolate_nodal(g, values.front(), x);
  if (t >= times.back()) return interpolate_nodal(g, values.back(), x);
  size_t hi = 1;
  while (hi < times.size() && times[hi] < t) ++hi;
  double w = (t - times[hi - 1]) / (times[hi] - times[hi - 1]);
  return (1.0 - w) * interpolate_nodal(g, values[hi - 1], x) +
         w * interpolate_nodal(g, values[hi], x);
}

MacroSolution solve_homogenized(const Matrix& b,
                                const std::function<double(const Vector&, double)>& source,
                                const MacroMesh& mesh, double tol) {
  mesh.validate();
  if (b.rows() != mesh.dimension || b.cols() != mesh.dimension)
    throw ValidationError("solve_homogenized: tensor dimension mismatch");
  double min_eig = min_symmetric_eigenvalue(b);
  if (min_eig <= 0.0) {
    std::ostringstream os;
    os << "solve_homogenized: effective tensor is not coercive (min symmetric eigenvalue "
       << min_eig << ")";
    throw ValidationError(os.str());
  }
  if (tol <= 0.0) throw ValidationError("solve_homogenized: tol must be positive");

  fem::Grid g = mesh.fem_grid();
  fem::ElementKernel kernel(g);
  auto sys = fem::assemble_stiffness(g, kernel, [&](const Vector&) { return b; });
  std::vector<int> boundary;
  for (int i = 0; i < g.node_count(); ++i)
    if (g.is_boundary_node(i)) boundary.push_back(i);
  fem::PinnedSolver solver(sys.stiffness, boundary, "homogenized problem");

  MacroSolution out;
  out.mesh = mesh;
  out.times = mesh.time_samples.empty() ? std::vector<double>{0.0} : mesh.time_samples;
  std::vector<char> mask(g.node_count(), 0);
  for (int i : boundary) mask[i] = 1;
  for (double t : out.times) {
    Vector load = fem::assemble_source_load(g, [&](const Vector& x) { return source(x, t); });
    Vector u = solver.solve(load);
    double rn = 0.0, bn = 0.0;
    Vector r = sys.stiffness * u - load;
    for (int i = 0; i < r.size(); ++i) {
      if (mask[i]) continue;
      rn += r[i] * r[i];
      bn += load[i] * load[i];
    }
    double rel = std::sqrt(rn) / std::max(std::sqrt(bn), 1e-14);
    if (rel > tol)
      throw SolverError("homogenized solve residual " + std::to_string(rel) +
                        " exceeds tolerance");
    out.values.push_back(u);
    out.residuals.push_back(rel);
  }
  return out;
}

} // namespace homog
