#include "homog/verify.hpp"

#include <cmath>
#include <sstream>

namespace homog {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// step must resolve the factor's period with at least 8 samples
void require_resolved(double step, double period, const std::string& factor_name,
                      const char* step_name) {
  if (step <= period / 8.0 * (1.0 + 1e-12)) return;
  std::ostringstream os;
  os << "multiscale pairing: " << step_name << " " << step << " does not resolve factor '"
     << factor_name << "' (period " << period << "; need " << step_name << " <= period/8)";
  throw ValidationError(os.str());
}

double factor_at(const TestFactor& f, double u) {
  return f.trivial ? 1.0 : f.value(wrap_unit(u));
}

double factor_derivative_at(const TestFactor& f, double u) {
  return f.trivial ? 0.0 : f.derivative(wrap_unit(u));
}

// W_i = int w(x) phi_i dx, so that int u_h w dx = W . u for P1/Q1 u_h
Vector spatial_weights(const fem::Grid& grid, const std::function<double(const Vector&)>& w) {
  return fem::assemble_source_load(grid, w);
}

// trapezoid in time of time_weight(t_k) * (W . u_k)
double spacetime_pairing(const FineScaleSolution& u, const Vector& weights,
                         const std::function<double(double)>& time_weight) {
  double total = 0.0;
  for (size_t k = 0; k + 1 < u.times.size(); ++k) {
    double fa = time_weight(u.times[k]) * weights.dot(u.values[k]);
    double fb = time_weight(u.times[k + 1]) * weights.dot(u.values[k + 1]);
    total += 0.5 * (fa + fb) * (u.times[k + 1] - u.times[k]);
  }
  return total;
}

Vector macro_nodal_at_time(const MacroSolution& m, double t) {
  if (m.values.size() == 1 || t <= m.times.front()) return m.values.front();
  if (t >= m.times.back()) return m.values.back();
  size_t hi = 1;
  while (hi < m.times.size() && m.times[hi] < t) ++hi;
  double w = (t - m.times[hi - 1]) / (m.times[hi] - m.times[hi - 1]);
  return (1.0 - w) * m.values[hi - 1] + w * m.values[hi];
}

// G_j = int d_j(u_h) v dx with 2-point Gauss for v (the gradient is
// piecewise linear, so this is exact for polynomial v up to the rule's order)
Vector gradient_pairing(const fem::Grid& g, const Vector& nodal, const MacroFactor& v) {
  const double pts[2] = {0.21132486540518711775, 1.0 - 0.21132486540518711775};
  Vector out = Vector::Zero(g.dim);
  const double vol = g.cell_volume();
  for (int e = 0; e < g.cell_count(); ++e) {
    auto nodes = g.cell_nodes(e);
    if (g.dim == 1) {
      double du = (nodal[nodes[1]] - nodal[nodes[0]]) / g.h(0);
      for (int gp = 0; gp < 2; ++gp) {
        Vector x(1);
        x[0] = (e + pts[gp]) * g.h(0);
        out[0] += 0.5 * vol * du * v.value(x);
      }
      continue;
    }
    int ex = e % g.cells, ey = e / g.cells;
    double u00 = nodal[nodes[0]], u10 = nodal[nodes[1]], u01 = nodal[nodes[2]],
           u11 = nodal[nodes[3]];
    for (int gx = 0; gx < 2; ++gx) {
      for (int gy = 0; gy < 2; ++gy) {
        double xi = pts[gx], eta = pts[gy];
        Vector x(2);
        x << (ex + xi) * g.h(0), (ey + eta) * g.h(1);
        double dx = ((1 - eta) * (u10 - u00) + eta * (u11 - u01)) / g.h(0);
        double dy = ((1 - xi) * (u01 - u00) + xi * (u11 - u10)) / g.h(1);
        double w = 0.25 * vol * v.value(x);
        out[0] += w * dx;
        out[1] += w * dy;
      }
    }
  }
  return out;
}

// int_Y chi(y) v2(y_1) dy for a mean-zero nodal corrector on the periodic grid
double corrector_pairing(const fem::Grid& grid, const Vector& chi, const TestFactor& v2) {
  Vector w = spatial_weights(grid, [&](const Vector& y) { return factor_at(v2, y[0]); });
  return w.dot(chi);
}

} // namespace

TestFactor factor_one() { return TestFactor{}; }

TestFactor factor_sin(int frequency) {
  if (frequency < 1) throw ValidationError("factor_sin: frequency must be >= 1");
  TestFactor f;
  f.name = "sin(2pi*" + std::to_string(frequency) + "u)";
  double k = kTwoPi * frequency;
  f.value = [k](double u) { return std::sin(k * u); };
  f.derivative = [k](double u) { return k * std::cos(k * u); };
  f.zero_mean = true;
  f.trivial = false;
  return f;
}

TestFactor factor_cos(int frequency) {
  if (frequency < 1) throw ValidationError("factor_cos: frequency must be >= 1");
  TestFactor f;
  f.name = "cos(2pi*" + std::to_string(frequency) + "u)";
  double k = kTwoPi * frequency;
  f.value = [k](double u) { return std::cos(k * u); };
  f.derivative = [k](double u) { return -k * std::sin(k * u); };
  f.zero_mean = true;
  f.trivial = false;
  return f;
}

MacroFactor macro_bubble(const Vector& lengths, int dimension) {
  MacroFactor f;
  f.name = "bubble";
  Vector len = lengths.size() ? lengths : Vector(Vector::Ones(dimension));
  f.value = [len, dimension](const Vector& x) {
    double v = 1.0;
    for (int d = 0; d < dimension; ++d) {
      double L = len[d];
      v *= 4.0 * x[d] * (L - x[d]) / (L * L);
    }
    return v;
  };
  return f;
}

MacroFactor macro_sine_bump(const Vector& lengths, int dimension) {
  MacroFactor f;
  f.name = "sine-bump";
  Vector len = lengths.size() ? lengths : Vector(Vector::Ones(dimension));
  f.value = [len, dimension](const Vector& x) {
    double v = 1.0;
    for (int d = 0; d < dimension; ++d) v *= std::sin(M_PI * x[d] / len[d]);
    return v;
  };
  return f;
}

TimeFactor time_bubble(double horizon) {
  if (horizon <= 0.0) throw ValidationError("time_bubble: horizon must be positive");
  TimeFactor f;
  f.name = "time-bubble";
  double T = horizon;
  // b(t) = 4 t (T-t) / T^2 in [0,1]; c1 = b^2 vanishes to first order at the ends
  f.value = [T](double t) {
    double b = 4.0 * t * (T - t) / (T * T);
    return b * b;
  };
  f.derivative = [T](double t) {
    double b = 4.0 * t * (T - t) / (T * T);
    double db = 4.0 * (T - 2.0 * t) / (T * T);
    return 2.0 * b * db;
  };
  return f;
}

TimeFactor time_sine_sq(double horizon) {
  if (horizon <= 0.0) throw ValidationError("time_sine_sq: horizon must be positive");
  TimeFactor f;
  f.name = "time-sine-sq";
  double T = horizon;
  f.value = [T](double t) {
    double s = std::sin(M_PI * t / T);
    return s * s;
  };
  f.derivative = [T](double t) { return M_PI / T * std::sin(2.0 * M_PI * t / T); };
  return f;
}

double eval_multiscale_pairing(const FineScaleSolution& u_eps, const OscillatingTest& test,
                               const ScaleExponents& exponents) {
  exponents.validate();
  const double eps = u_eps.eps;
  if (!test.v2.trivial) require_resolved(u_eps.h, eps, test.v2.name, "mesh size");
  if (!test.v3.trivial) require_resolved(u_eps.h, eps * eps, test.v3.name, "mesh size");
  if (!test.c2.trivial)
    require_resolved(u_eps.dt, std::pow(eps, exponents.q), test.c2.name, "time step");
  if (!test.c3.trivial)
    require_resolved(u_eps.dt, std::pow(eps, exponents.r), test.c3.name, "time step");

  fem::Grid g = u_eps.fem_grid();
  double eps2 = eps * eps;
  Vector weights = spatial_weights(g, [&](const Vector& x) {
    return test.v.value(x) * factor_at(test.v2, x[0] / eps) * factor_at(test.v3, x[0] / eps2);
  });
  double epsq = std::pow(eps, exponents.q), epsr = std::pow(eps, exponents.r);
  return spacetime_pairing(u_eps, weights, [&](double t) {
    return test.c1.value(t) * factor_at(test.c2, t / epsq) * factor_at(test.c3, t / epsr);
  });
}

std::vector<ConditionRow> check_time_conditions(const std::vector<FineScaleSolution>& runs,
                                                const MacroFactor& v, const TimeFactor& c1,
                                                const TestFactor& c2, const TestFactor& c3,
                                                const ScaleExponents& exponents) {
  exponents.validate();
  std::vector<ConditionRow> rows;
  rows.reserve(runs.size());
  for (const FineScaleSolution& u : runs) {
    const double eps = u.eps;
    const double epsq = std::pow(eps, exponents.q), epsr = std::pow(eps, exponents.r);
    if (!c2.trivial) require_resolved(u.dt, epsq, c2.name, "time step");
    if (!c3.trivial) require_resolved(u.dt, epsr, c3.name, "time step");

    fem::Grid g = u.fem_grid();
    Vector weights = spatial_weights(g, v.value);
    const double eps_rq = std::pow(eps, exponents.r - exponents.q);

    // d_t[c1 c2(t/e^q) c3(t/e^r)] expanded and rescaled by e^r: the surviving
    // term as eps -> 0 is c1 c2 c3'
    ConditionRow row;
    row.eps = eps;
    row.condition1 = spacetime_pairing(u, weights, [&](double t) {
      double s1 = t / epsq, s2 = t / epsr;
      return epsr * c1.derivative(t) * factor_at(c2, s1) * factor_at(c3, s2) +
             eps_rq * c1.value(t) * factor_derivative_at(c2, s1) * factor_at(c3, s2) +
             c1.value(t) * factor_at(c2, s1) * factor_derivative_at(c3, s2);
    });
    row.condition2 = spacetime_pairing(u, weights, [&](double t) {
      double s1 = t / epsq;
      return epsq * c1.derivative(t) * factor_at(c2, s1) +
             c1.value(t) * factor_derivative_at(c2, s1);
    });
    rows.push_back(row);
  }
  return rows;
}

std::vector<ConditionCombo> condition_registry() {
  return {{"cos_s1/sin_s2", factor_cos(1), factor_sin(1)},
          {"cos_s1/cos_s2", factor_cos(1), factor_cos(1)},
          {"sin_2s1/sin_s2", factor_sin(2), factor_sin(1)},
          {"sin_2s1/cos_s2", factor_sin(2), factor_cos(1)}};
}

VeryWeakProbe very_weak_corrector_probe(const FineScaleSolution& u_eps,
                                        const OscillatingTest& test,
                                        const ScaleExponents& exponents,
                                        const CorrectorSet& correctors,
                                        const MacroSolution& macro_u) {
  exponents.validate();
  if (test.v2.trivial || !test.v2.zero_mean)
    throw ValidationError("very weak probe: the y1 factor must be nontrivial with zero mean");
  require_resolved(u_eps.h, u_eps.eps, test.v2.name, "mesh size");

  const double eps = u_eps.eps;
  fem::Grid g = u_eps.fem_grid();
  Vector weights = spatial_weights(g, [&](const Vector& x) {
    return test.v.value(x) * factor_at(test.v2, x[0] / eps);
  });
  double measured =
      spacetime_pairing(u_eps, weights, [&](double t) { return test.c1.value(t); }) / eps;

  // predicted = sum_j int d_j(u) v c1 dx dt * int chi1_j v2 dy
  fem::Grid mg = macro_u.mesh.fem_grid();
  fem::Grid cg = correctors.grid.fem_grid();
  const int dim = mg.dim;
  if (static_cast<int>(correctors.chi1.size()) != dim)
    throw ValidationError("very weak probe: corrector set must hold one direction per axis");
  Vector chi_weights(dim);
  for (int j = 0; j < dim; ++j)
    chi_weights[j] = corrector_pairing(cg, correctors.chi1[static_cast<size_t>(j)], test.v2);

  double predicted = 0.0;
  if (macro_u.values.size() == 1) {
    // time-independent macro solution: hoist the gradient pairing
    double gw = gradient_pairing(mg, macro_u.values.front(), test.v).dot(chi_weights);
    for (size_t k = 0; k + 1 < u_eps.times.size(); ++k)
      predicted += 0.5 * (u_eps.times[k + 1] - u_eps.times[k]) * gw *
                   (test.c1.value(u_eps.times[k]) + test.c1.value(u_eps.times[k + 1]));
  } else {
    for (size_t k = 0; k + 1 < u_eps.times.size(); ++k) {
      double ta = u_eps.times[k], tb = u_eps.times[k + 1];
      Vector ga = gradient_pairing(mg, macro_nodal_at_time(macro_u, ta), test.v);
      Vector gb = gradient_pairing(mg, macro_nodal_at_time(macro_u, tb), test.v);
      predicted += 0.5 * (tb - ta) * (test.c1.value(ta) * ga.dot(chi_weights) +
                                      test.c1.value(tb) * gb.dot(chi_weights));
    }
  }
  return VeryWeakProbe{measured, predicted};
}

} // namespace homog
