#pragma once

#include <vector>

#include "homog/cell.hpp"
#include "homog/coefficient_field.hpp"
#include "homog/regime.hpp"

namespace homog {

/// Midpoint sample counts for the slow time arguments; the y1 lattice is the
/// outer cell grid itself (inner problems are solved at outer cell centers).
struct SlowSampleLattice {
  int s1_samples = 8;
  int s2_samples = 8;

  void validate() const {
    if (s1_samples < 1 || s2_samples < 1)
      throw ValidationError("slow sample lattice: counts must be >= 1");
  }
};

struct EffectiveNumerics {
  CellGrid inner_grid;  // y2 problems
  CellGrid outer_grid;  // y1 problems
  SlowSampleLattice lattice;
  double cell_tol = 1e-9;
  int pre_average_points = 32;
  int workers = 1;
};

/// The flux tensor of the inner stage, stored per outer cell and per
/// surviving time sample. Absent axes have count 1.
struct IntermediateCoefficient {
  int dimension = 1;
  int y1_cells = 0;
  bool has_s1 = false, has_s2 = false;
  int n_s1 = 1, n_s2 = 1;
  std::vector<Matrix> values; // index (e * n_s1 + i1) * n_s2 + i2

  const Matrix& at(int e, int i1, int i2) const {
    return values[static_cast<size_t>((e * n_s1 + i1) * n_s2 + i2)];
  }
  Matrix& at(int e, int i1, int i2) {
    return values[static_cast<size_t>((e * n_s1 + i1) * n_s2 + i2)];
  }
};

struct EffectiveTensor {
  Matrix b;
  int case_index = 0;
  // provenance
  CellGrid inner_grid, outer_grid;
  SlowSampleLattice lattice;
  double cell_tol = 0.0;
  int pre_average_points = 0;
};

/// Outer-stage correctors chi1_j on the y1 grid, averaged over the slow time
/// samples (and over the period for parabolic outer problems).
struct CorrectorSet {
  CellGrid grid;
  std::vector<Vector> chi1; // one mean-zero nodal field per direction
};

struct EffectiveResult {
  EffectiveTensor tensor;
  RegimeDescriptor regime;
  CorrectorSet correctors;
};

/// Midpoint-quadrature average of the field over the named time axes.
/// Identity for mode none; exact for fields independent of the averaged axes.
CoefficientField pre_average_field(const CoefficientField& field, PreAverage mode,
                                   int quad_points);

/// Solve the y2 cell problems at every lattice point of the surviving slow
/// arguments and store the flux tensors. `field` must already be
/// pre-averaged per the regime.
IntermediateCoefficient compute_inner_stage(const CoefficientField& field,
                                            const RegimeDescriptor& regime,
                                            const EffectiveNumerics& numerics);

/// Apply mid_average, solve the y1 problems per remaining time sample, and
/// average the outer flux over final_average axes to produce constant b.
EffectiveResult compute_outer_stage(const IntermediateCoefficient& intermediate,
                                    const RegimeDescriptor& regime,
                                    const EffectiveNumerics& numerics);

/// classify -> pre-average -> inner stage -> outer stage.
EffectiveResult compute_effective_tensor(const CoefficientField& field,
                                         const ScaleExponents& exponents,
                                         const EffectiveNumerics& numerics);

} // namespace homog
