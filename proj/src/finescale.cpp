#include "homog/finescale.hpp"

#include <cmath>
#include <sstream>

namespace homog {

FineScaleSolution solve_fine(const FineScaleProblem& problem, double eps,
                             const FineMeshParams& params) {
  problem.validate();
  if (!(eps > 0.0 && eps < 1.0)) throw ValidationError("solve_fine: eps must be in (0,1)");
  if (params.resolution_factor < 8.0)
    throw ValidationError("solve_fine: resolution_factor must be >= 8");

  const int dim = problem.field.dimension;
  const double p = problem.exponents.p, q = problem.exponents.q, r = problem.exponents.r;
  const double T = problem.horizon;
  double max_len = 1.0;
  for (int d = 0; d < dim; ++d)
    max_len = std::max(max_len, problem.lengths.size() ? problem.lengths[d] : 1.0);

  const double h_max = eps * eps / params.resolution_factor;
  const double dt_max = std::pow(eps, r) / params.resolution_factor;
  // budget accounting in doubles: the step counts can overflow int before
  // the refusal below gets a chance to fire
  const double cells_d = std::ceil(max_len / h_max);
  const double steps_d = std::ceil(T / dt_max);
  const double work = std::pow(cells_d, dim) * steps_d;
  if (work > params.step_budget) {
    // minimal admissible eps: (L f / e^2)^N * T f / e^r <= budget
    double lo = eps, hi = 1.0;
    for (int it = 0; it < 80; ++it) {
      double mid = 0.5 * (lo + hi);
      double w = std::pow(max_len * params.resolution_factor / (mid * mid), dim) * T *
                 params.resolution_factor / std::pow(mid, r);
      (w > params.step_budget ? lo : hi) = mid;
    }
    std::ostringstream os;
    os << "solve_fine: eps=" << eps << " needs " << work << " cell-steps, exceeding the budget "
       << params.step_budget << "; minimal admissible eps ~= " << hi;
    throw ValidationError(os.str());
  }
  const int cells = static_cast<int>(cells_d);
  const int steps = static_cast<int>(steps_d);

  FineScaleSolution sol;
  sol.dimension = dim;
  sol.lengths = problem.lengths;
  sol.eps = eps;
  sol.cells = cells;
  sol.h = max_len / cells;
  sol.dt = T / steps;
  sol.resolution_factor = params.resolution_factor;

  fem::Grid g = sol.fem_grid();
  fem::ElementKernel kernel(g);
  fem::SparseMatrix mass = fem::assemble_mass(g, kernel);
  auto unit_sys = fem::assemble_stiffness(g, kernel, [&](const Vector&) {
    return Matrix(Matrix::Identity(dim, dim));
  });
  std::vector<int> boundary;
  for (int i = 0; i < g.node_count(); ++i)
    if (g.is_boundary_node(i)) boundary.push_back(i);
  std::vector<char> mask(g.node_count(), 0);
  for (int i : boundary) mask[i] = 1;

  // initial slice: nodal interpolant of u0, forced to the boundary value 0
  Vector u(g.node_count());
  for (int i = 0; i < g.node_count(); ++i)
    u[i] = mask[i] ? 0.0 : problem.initial(g.node_coord(i));
  sol.times.push_back(0.0);
  sol.values.push_back(u);

  const double mass_scale = std::pow(eps, p);
  const double eps2 = eps * eps, epsq = std::pow(eps, q), epsr = std::pow(eps, r);
  double h1_acc = 0.0;

  for (int m = 1; m <= steps; ++m) {
    double t = m * sol.dt;
    auto coefficient = [&](const Vector& x) {
      Vector y1(dim), y2(dim);
      for (int d = 0; d < dim; ++d) {
        y1[d] = x[d] / eps;
        y2[d] = x[d] / eps2;
      }
      return eval_coefficient(problem.field, y1, y2, t / epsq, t / epsr);
    };
    auto sys = fem::assemble_stiffness(g, kernel, coefficient);
    fem::SparseMatrix system = (mass_scale / sol.dt) * mass + sys.stiffness;
    Vector load = fem::assemble_source_load(g, [&](const Vector& x) { return problem.source(x, t); });
    Vector rhs = (mass_scale / sol.dt) * (mass * u) + load;
    fem::PinnedSolver solver(system, boundary, "fine-scale step");
    Vector u_next = solver.solve(rhs);
    // residual over free rows
    Vector res = system * u_next - rhs;
    double rn = 0.0, bn = 0.0;
    for (int i = 0; i < res.size(); ++i) {
      if (mask[i]) continue;
      rn += res[i] * res[i];
      bn += rhs[i] * rhs[i];
    }
    if (std::sqrt(rn) > params.tol * std::max(std::sqrt(bn), 1e-14))
      throw SolverError("fine-scale step residual exceeds tolerance at t=" + std::to_string(t));
    u = u_next;
    sol.times.push_back(t);
    sol.values.push_back(u);
    h1_acc += sol.dt * (u.dot(unit_sys.stiffness * u) + u.dot(mass * u));
  }
  sol.h1_norm = std::sqrt(std::max(0.0, h1_acc));
  return sol;
}

double l2_error(const FineScaleSolution& fine, const MacroSolution& macro, ErrorWindow window,
                double window_start) {
  double t0 = (window == ErrorWindow::FullTime) ? 0.0 : window_start;
  if (t0 >= fine.times.back()) throw ValidationError("l2_error: empty time window");

  fem::Grid g = fine.fem_grid();
  const double pts[2] = {0.21132486540518711775, 1.0 - 0.21132486540518711775};
  const double vol = g.cell_volume();

  auto slice_sq = [&](const Vector& uf, double t) {
    double acc = 0.0;
    if (g.dim == 1) {
      for (int e = 0; e < g.cell_count(); ++e) {
        auto nodes = g.cell_nodes(e);
        for (int gp = 0; gp < 2; ++gp) {
          double xi = pts[gp];
          Vector x(1);
          x[0] = (e + xi) * g.h(0);
          double diff = (1.0 - xi) * uf[nodes[0]] + xi * uf[nodes[1]] - macro.at(x, t);
          acc += 0.5 * vol * diff * diff;
        }
      }
      return acc;
    }
    for (int e = 0; e < g.cell_count(); ++e) {
      auto nodes = g.cell_nodes(e);
      int ex = e % g.cells, ey = e / g.cells;
      for (int gx = 0; gx < 2; ++gx) {
        for (int gy = 0; gy < 2; ++gy) {
          double xi = pts[gx], eta = pts[gy];
          Vector x(2);
          x << (ex + xi) * g.h(0), (ey + eta) * g.h(1);
          double ufv = (1 - xi) * (1 - eta) * uf[nodes[0]] + xi * (1 - eta) * uf[nodes[1]] +
                       (1 - xi) * eta * uf[nodes[2]] + xi * eta * uf[nodes[3]];
          double diff = ufv - macro.at(x, t);
          acc += 0.25 * vol * diff * diff;
        }
      }
    }
    return acc;
  };

  // trapezoid in time over steps with t >= t0
  double total = 0.0;
  for (size_t k = 0; k + 1 < fine.times.size(); ++k) {
    double ta = fine.times[k], tb = fine.times[k + 1];
    if (tb <= t0) continue;
    double a = std::max(ta, t0);
    double sa = slice_sq(fine.values[k], ta);
    double sb = slice_sq(fine.values[k + 1], tb);
    if (a > ta) { // partial interval: linear interpolation of the integrand
      double w = (a - ta) / (tb - ta);
      sa = (1.0 - w) * sa + w * sb;
    }
    total += 0.5 * (sa + sb) * (tb - a);
  }
  return std::sqrt(std::max(0.0, total));
}

} // namespace homog
