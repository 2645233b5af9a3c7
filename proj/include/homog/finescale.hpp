#pragma once

#include <functional>
#include <vector>

#include "homog/coefficient_field.hpp"
#include "homog/macro.hpp"
#include "homog/regime.hpp"

namespace homog {

/// The resolved eps-problem: eps^p d_t u - div(a(x/eps, x/eps^2, t/eps^q,
/// t/eps^r) grad u) = f on a box, u = 0 on the boundary, u(.,0) = u0.
struct FineScaleProblem {
  CoefficientField field;
  ScaleExponents exponents;
  std::function<double(const Vector& x, double t)> source;
  std::function<double(const Vector& x)> initial;
  Vector lengths;   // box side lengths; unit box if empty
  double horizon = 1.0;

  void validate() const {
    exponents.validate();
    field_check();
    if (horizon <= 0.0) throw ValidationError("fine-scale problem: T must be positive");
  }

private:
  void field_check() const {
    if (field.dimension < 1 || field.dimension > 2)
      throw ValidationError("fine-scale problem: dimension in {1,2}");
    if (lengths.size() && lengths.minCoeff() <= 0.0)
      throw ValidationError("fine-scale problem: degenerate box");
  }
};

struct FineMeshParams {
  double resolution_factor = 8.0; // h <= eps^2/factor, dt <= eps^r/factor
  double step_budget = 1e7;       // refuse when cells^N * steps exceeds this
  double tol = 1e-10;             // per-step linear residual
};

struct FineScaleSolution {
  int dimension = 1;
  Vector lengths;
  double eps = 0.0;
  int cells = 0;
  double h = 0.0, dt = 0.0;
  double resolution_factor = 0.0;
  std::vector<double> times;   // 0, dt, ..., T
  std::vector<Vector> values;  // nodal values per time, boundary rows zero
  double h1_norm = 0.0;        // discrete L2(0,T;H1) norm

  fem::Grid fem_grid() const {
    fem::Grid g;
    g.dim = dimension;
    g.cells = cells;
    g.lengths = lengths;
    g.periodic = false;
    return g;
  }
};

/// Implicit Euler with the eps^p mass scaling; the coefficient is sampled at
/// cell centers at each step's endpoint. Throws ValidationError when the
/// resolution constraints exceed the step budget (the message names the
/// minimal admissible eps).
FineScaleSolution solve_fine(const FineScaleProblem& problem, double eps,
                             const FineMeshParams& params);

enum class ErrorWindow { FullTime, TailOnly };

/// ||u_eps - u||_{L2(Omega x window)}; the tail window starts at
/// window_start (default semantics: 0.1 * T chosen by the caller).
double l2_error(const FineScaleSolution& fine, const MacroSolution& macro, ErrorWindow window,
                double window_start = 0.0);

} // namespace homog
