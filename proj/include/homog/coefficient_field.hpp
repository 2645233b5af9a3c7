#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "homog/types.hpp"

namespace homog {

enum class CoefficientFamily { Constant, SeparableProduct, Trigonometric, Layered, Expression };

std::string to_string(CoefficientFamily family);

/// One scalar factor of a separable product, g(u) = offset + amplitude * trig(2*pi*freq*u).
struct SeparableFactor {
  double offset = 1.0;
  double amplitude = 0.0;
  int frequency = 1;
  bool use_cos = false; // sin otherwise

  double operator()(double u) const {
    double arg = 2.0 * M_PI * frequency * u;
    return offset + amplitude * (use_cos ? std::cos(arg) : std::sin(arg));
  }
  double min_value() const { return offset - std::abs(amplitude); }
  double max_value() const { return offset + std::abs(amplitude); }
};

/// The oscillating matrix field a(y1, y2, s1, s2), 1-periodic in every
/// argument, with a declared coercivity constant and entry bound.
/// Immutable after construction; the evaluator must be pure.
struct CoefficientField {
  int dimension = 1; // N in {1, 2}
  std::function<Matrix(const Vector& y1, const Vector& y2, double s1, double s2)> evaluator;
  double coercivity = 1.0;   // C0 > 0, declared lower bound on a xi.xi / |xi|^2
  double entry_bound = 1.0;  // declared upper bound on max |a_ij|
  CoefficientFamily family = CoefficientFamily::Constant;
  /// Axis-aligned discontinuity coordinates per spatial variable (layered
  /// family); cell grids should align with these.
  std::vector<double> y1_breaks;
  std::vector<double> y2_breaks;
};

/// Evaluate with periodic wrapping of all arguments. Throws SolverError if
/// the evaluator produces a non-finite entry.
Matrix eval_coefficient(const CoefficientField& field, const Vector& y1, const Vector& y2,
                        double s1, double s2);

struct FieldValidation {
  bool passed = false;
  double worst_coercivity_ratio = 0.0; // min over samples and probe directions
  double periodicity_defect = 0.0;     // max |a(z) - a(z+1)| over sampled axes
  double max_entry = 0.0;
  std::string failure_point;           // set when a sample violates coercivity
};

/// Dense-sampling validation of periodicity, coercivity and entry bound.
/// Passes iff worst ratio >= C0 * (1 - 1e-9), periodicity defect <= 1e-12
/// and max entry <= declared bound.
FieldValidation validate_field(const CoefficientField& field, int samples_per_axis,
                               int probe_directions);

// Built-in families.

CoefficientField make_constant_field(const Matrix& a0);

/// Product of (offset + sin) factors over a chosen subset of
/// {y1, y2, s1, s2}, times the identity. Every factor is (2 + sin 2*pi*u)
/// unless overridden.
struct TrigVariable {
  enum class Kind { Y1, Y2, S1, S2 } kind;
  int component = 0; // for y1/y2 in 2D
  SeparableFactor factor{2.0, 1.0, 1, false};
};
CoefficientField make_trigonometric_field(int dimension, const std::vector<TrigVariable>& vars);

/// f1(y1[c1]) * f2(y2[c2]) * g1(s1) * g2(s2) * I.
CoefficientField make_separable_field(int dimension, SeparableFactor f_y1, SeparableFactor f_y2,
                                      SeparableFactor g_s1, SeparableFactor g_s2,
                                      int y1_component = 0, int y2_component = 0);

/// Piecewise-constant layers in a single fast spatial coordinate, times the
/// identity. `breaks` are the layer boundaries in (0,1), strictly increasing;
/// layer k covers [breaks[k-1], breaks[k]) with breaks[-1] = 0.
CoefficientField make_layered_field(int dimension, bool on_y2, int component,
                                    const std::vector<double>& breaks,
                                    const std::vector<double>& values);

/// Matrix of scalar expressions over {y1[i], y2[i], s1, s2}; coercivity and
/// entry bound must be declared by the caller (checked by validate_field).
CoefficientField make_expression_field(int dimension,
                                       const std::vector<std::vector<std::string>>& entries,
                                       double declared_coercivity, double declared_bound);

} // namespace homog
