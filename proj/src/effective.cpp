#include "homog/effective.hpp"

#include "homog/parallel.hpp"

namespace homog {
namespace {

double midpoint_sample(int i, int n) { return (i + 0.5) / n; }

/// Periodic linear interpolation of per-sample values at midpoint abscissae.
Matrix interp_periodic(const std::vector<const Matrix*>& samples, double s) {
  int n = static_cast<int>(samples.size());
  if (n == 1) return *samples[0];
  double u = wrap_unit(s) * n - 0.5;
  double base = std::floor(u);
  double frac = u - base;
  int i0 = static_cast<int>(base);
  i0 = ((i0 % n) + n) % n;
  int i1 = (i0 + 1) % n;
  return (1.0 - frac) * (*samples[i0]) + frac * (*samples[i1]);
}

int outer_cell_index(const fem::Grid& grid, const Vector& y1) {
  auto clampc = [&](double u) {
    int c = static_cast<int>(std::floor(wrap_unit(u) * grid.cells));
    return std::min(std::max(c, 0), grid.cells - 1);
  };
  if (grid.dim == 1) return clampc(y1[0]);
  return clampc(y1[0]) + grid.cells * clampc(y1[1]);
}

} // namespace

CoefficientField pre_average_field(const CoefficientField& field, PreAverage mode,
                                   int quad_points) {
  if (mode == PreAverage::None) return field;
  if (quad_points < 2)
    throw ValidationError("pre_average_field: quad_points must be >= 2 for non-trivial modes");
  CoefficientField out = field;
  auto inner = field.evaluator;
  int n = field.dimension;
  int g = quad_points;
  if (mode == PreAverage::OverS2) {
    out.evaluator = [inner, g, n](const Vector& y1, const Vector& y2, double s1, double) {
      Matrix acc = Matrix::Zero(n, n);
      for (int k = 0; k < g; ++k) acc += inner(y1, y2, s1, midpoint_sample(k, g));
      return Matrix(acc / g);
    };
  } else {
    out.evaluator = [inner, g, n](const Vector& y1, const Vector& y2, double, double) {
      Matrix acc = Matrix::Zero(n, n);
      for (int k1 = 0; k1 < g; ++k1)
        for (int k2 = 0; k2 < g; ++k2)
          acc += inner(y1, y2, midpoint_sample(k1, g), midpoint_sample(k2, g));
      return Matrix(acc / (g * g));
    };
  }
  return out;
}

IntermediateCoefficient compute_inner_stage(const CoefficientField& field,
                                            const RegimeDescriptor& regime,
                                            const EffectiveNumerics& numerics) {
  numerics.lattice.validate();
  numerics.inner_grid.validate();
  numerics.outer_grid.validate();
  const int n = field.dimension;

  IntermediateCoefficient im;
  im.dimension = n;
  fem::Grid outer = numerics.outer_grid.fem_grid();
  im.y1_cells = outer.cell_count();
  im.has_s1 = regime.pre_average != PreAverage::OverS1AndS2 &&
              regime.inner_type != StageType::ParabolicInS1;
  im.has_s2 = regime.pre_average == PreAverage::None &&
              regime.inner_type != StageType::ParabolicInS2;
  im.n_s1 = im.has_s1 ? numerics.lattice.s1_samples : 1;
  im.n_s2 = im.has_s2 ? numerics.lattice.s2_samples : 1;
  im.values.assign(static_cast<size_t>(im.y1_cells) * im.n_s1 * im.n_s2, Matrix());

  const int tasks = im.y1_cells * im.n_s1 * im.n_s2;
  parallel_for(tasks, numerics.workers, [&](int task) {
    int i2 = task % im.n_s2;
    int i1 = (task / im.n_s2) % im.n_s1;
    int e = task / (im.n_s1 * im.n_s2);
    Vector y1c = outer.cell_center(e);
    double s1 = im.has_s1 ? midpoint_sample(i1, im.n_s1) : 0.0;
    double s2 = im.has_s2 ? midpoint_sample(i2, im.n_s2) : 0.0;

    std::vector<CellCorrector> correctors;
    correctors.reserve(n);
    try {
      for (int j = 0; j < n; ++j) {
        if (regime.inner_type == StageType::Elliptic) {
          correctors.push_back(solve_elliptic_cell(
              [&](const Vector& y2) { return eval_coefficient(field, y1c, y2, s1, s2); }, n, j,
              numerics.inner_grid, numerics.cell_tol));
        } else if (regime.inner_type == StageType::ParabolicInS2) {
          correctors.push_back(solve_periodic_parabolic_cell(
              [&](const Vector& y2, double s) { return eval_coefficient(field, y1c, y2, s1, s); },
              n, j, numerics.inner_grid, numerics.cell_tol));
        } else { // ParabolicInS1
          correctors.push_back(solve_periodic_parabolic_cell(
              [&](const Vector& y2, double s) { return eval_coefficient(field, y1c, y2, s, s2); },
              n, j, numerics.inner_grid, numerics.cell_tol));
        }
      }
    } catch (const std::exception& ex) {
      throw SolverError("inner stage failed at y1=(" + std::to_string(y1c[0]) +
                        (n == 2 ? "," + std::to_string(y1c[1]) : "") + ") s1=" +
                        std::to_string(s1) + " s2=" + std::to_string(s2) + ": " + ex.what());
    }
    im.at(e, i1, i2) = cell_flux_tensor(correctors);
  });
  return im;
}

namespace {

IntermediateCoefficient apply_mid_average(const IntermediateCoefficient& im, unsigned axes) {
  bool drop_s1 = (axes & kAxisS1) && im.has_s1;
  bool drop_s2 = (axes & kAxisS2) && im.has_s2;
  if (!drop_s1 && !drop_s2) return im;
  IntermediateCoefficient out;
  out.dimension = im.dimension;
  out.y1_cells = im.y1_cells;
  out.has_s1 = im.has_s1 && !drop_s1;
  out.has_s2 = im.has_s2 && !drop_s2;
  out.n_s1 = out.has_s1 ? im.n_s1 : 1;
  out.n_s2 = out.has_s2 ? im.n_s2 : 1;
  out.values.assign(static_cast<size_t>(out.y1_cells) * out.n_s1 * out.n_s2, Matrix());
  for (int e = 0; e < im.y1_cells; ++e) {
    for (int o1 = 0; o1 < out.n_s1; ++o1) {
      for (int o2 = 0; o2 < out.n_s2; ++o2) {
        Matrix acc = Matrix::Zero(im.dimension, im.dimension);
        int count = 0;
        for (int i1 = 0; i1 < im.n_s1; ++i1) {
          if (!drop_s1 && i1 != o1) continue;
          for (int i2 = 0; i2 < im.n_s2; ++i2) {
            if (!drop_s2 && i2 != o2) continue;
            acc += im.at(e, i1, i2);
            ++count;
          }
        }
        out.at(e, o1, o2) = acc / count;
      }
    }
  }
  return out;
}

} // namespace

EffectiveResult compute_outer_stage(const IntermediateCoefficient& intermediate,
                                    const RegimeDescriptor& regime,
                                    const EffectiveNumerics& numerics) {
  IntermediateCoefficient im = apply_mid_average(intermediate, regime.mid_average);
  const int n = im.dimension;
  fem::Grid outer = numerics.outer_grid.fem_grid();
  if (im.y1_cells != outer.cell_count())
    throw ValidationError("outer stage: intermediate coefficient does not match the outer grid");

  // Every time axis still present must be consumed by the final average (or
  // by the outer parabolic solver's period average).
  auto axis_consumed = [&](unsigned axis, StageType parabolic_type) {
    return (regime.final_average & axis) || regime.outer_type == parabolic_type;
  };
  if (im.has_s1 && !axis_consumed(kAxisS1, StageType::ParabolicInS1))
    throw ValidationError("outer stage: s1 axis not consumed by the recipe");
  if (im.has_s2 && !axis_consumed(kAxisS2, StageType::ParabolicInS2))
    throw ValidationError("outer stage: s2 axis not consumed by the recipe");

  EffectiveResult result;
  result.regime = regime;
  result.correctors.grid = numerics.outer_grid;
  result.correctors.chi1.assign(n, Vector::Zero(outer.node_count()));

  Matrix b_acc = Matrix::Zero(n, n);
  int tensor_count = 0;
  int corrector_count = 0;

  auto coefficient_at = [&](int e, int i1, int i2) -> const Matrix& { return im.at(e, i1, i2); };

  if (regime.outer_type == StageType::Elliptic) {
    for (int i1 = 0; i1 < im.n_s1; ++i1) {
      for (int i2 = 0; i2 < im.n_s2; ++i2) {
        std::vector<CellCorrector> correctors;
        for (int j = 0; j < n; ++j) {
          correctors.push_back(solve_elliptic_cell(
              [&](const Vector& y1) { return coefficient_at(outer_cell_index(outer, y1), i1, i2); },
              n, j, numerics.outer_grid, numerics.cell_tol));
          result.correctors.chi1[j] += correctors.back().values;
        }
        b_acc += cell_flux_tensor(correctors);
        ++tensor_count;
        ++corrector_count;
      }
    }
  } else if (regime.outer_type == StageType::ParabolicInS1) {
    // The intermediate tensor is interpolated linearly (periodically) in s1
    // between the slow samples at the solver's time steps.
    for (int i2 = 0; i2 < im.n_s2; ++i2) {
      std::vector<CellCorrector> correctors;
      for (int j = 0; j < n; ++j) {
        correctors.push_back(solve_periodic_parabolic_cell(
            [&](const Vector& y1, double s) {
              int e = outer_cell_index(outer, y1);
              std::vector<const Matrix*> samples;
              samples.reserve(im.n_s1);
              for (int i1 = 0; i1 < im.n_s1; ++i1) samples.push_back(&im.at(e, i1, i2));
              return interp_periodic(samples, s);
            },
            n, j, numerics.outer_grid, numerics.cell_tol));
        Vector avg = Vector::Zero(outer.node_count());
        for (const Vector& slice : correctors.back().slices) avg += slice;
        result.correctors.chi1[j] += avg / static_cast<double>(correctors.back().slices.size());
      }
      b_acc += cell_flux_tensor(correctors); // flux is already the period average
      ++tensor_count;
      ++corrector_count;
    }
  } else { // ParabolicInS2
    for (int i1 = 0; i1 < im.n_s1; ++i1) {
      std::vector<CellCorrector> correctors;
      for (int j = 0; j < n; ++j) {
        correctors.push_back(solve_periodic_parabolic_cell(
            [&](const Vector& y1, double s) {
              int e = outer_cell_index(outer, y1);
              std::vector<const Matrix*> samples;
              samples.reserve(im.n_s2);
              for (int i2 = 0; i2 < im.n_s2; ++i2) samples.push_back(&im.at(e, i1, i2));
              return interp_periodic(samples, s);
            },
            n, j, numerics.outer_grid, numerics.cell_tol));
        Vector avg = Vector::Zero(outer.node_count());
        for (const Vector& slice : correctors.back().slices) avg += slice;
        result.correctors.chi1[j] += avg / static_cast<double>(correctors.back().slices.size());
      }
      b_acc += cell_flux_tensor(correctors);
      ++tensor_count;
      ++corrector_count;
    }
  }

  result.tensor.b = b_acc / tensor_count;
  result.tensor.case_index = regime.case_index;
  result.tensor.inner_grid = numerics.inner_grid;
  result.tensor.outer_grid = numerics.outer_grid;
  result.tensor.lattice = numerics.lattice;
  result.tensor.cell_tol = numerics.cell_tol;
  result.tensor.pre_average_points = numerics.pre_average_points;
  for (int j = 0; j < n; ++j) result.correctors.chi1[j] /= corrector_count;
  return result;
}

EffectiveResult compute_effective_tensor(const CoefficientField& field,
                                         const ScaleExponents& exponents,
                                         const EffectiveNumerics& numerics) {
  RegimeDescriptor regime = classify_regime(exponents);
  CoefficientField averaged =
      pre_average_field(field, regime.pre_average, numerics.pre_average_points);
  IntermediateCoefficient im = compute_inner_stage(averaged, regime, numerics);
  return compute_outer_stage(im, regime, numerics);
}

} // namespace homog
