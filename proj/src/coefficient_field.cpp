#include "homog/coefficient_field.hpp"

#include <limits>
#include <sstream>

#include "homog/expression.hpp"

namespace homog {

std::string to_string(CoefficientFamily family) {
  switch (family) {
    case CoefficientFamily::Constant: return "constant";
    case CoefficientFamily::SeparableProduct: return "separable_product";
    case CoefficientFamily::Trigonometric: return "trigonometric";
    case CoefficientFamily::Layered: return "layered";
    case CoefficientFamily::Expression: return "expression";
  }
  return "?";
}

Matrix eval_coefficient(const CoefficientField& field, const Vector& y1, const Vector& y2,
                        double s1, double s2) {
  Matrix a = field.evaluator(wrap_unit(y1), wrap_unit(y2), wrap_unit(s1), wrap_unit(s2));
  if (!a.allFinite()) {
    std::ostringstream os;
    os << "coefficient evaluator returned a non-finite entry at y1=(" << y1.transpose()
       << ") y2=(" << y2.transpose() << ") s1=" << s1 << " s2=" << s2;
    throw SolverError(os.str());
  }
  return a;
}

FieldValidation validate_field(const CoefficientField& field, int samples_per_axis,
                               int probe_directions) {
  if (samples_per_axis < 2) throw ValidationError("validate_field: samples_per_axis must be >= 2");
  if (probe_directions < 1) throw ValidationError("validate_field: probe_directions must be >= 1");

  const int n = field.dimension;
  const int m = samples_per_axis;
  FieldValidation report;
  report.worst_coercivity_ratio = std::numeric_limits<double>::infinity();

  // Probe directions: axes plus equally spaced unit vectors in 2D.
  std::vector<Vector> probes;
  for (int d = 0; d < n; ++d) {
    Vector e = Vector::Zero(n);
    e[d] = 1.0;
    probes.push_back(e);
  }
  if (n == 2) {
    for (int k = 0; static_cast<int>(probes.size()) < probe_directions; ++k) {
      double ang = M_PI * (k + 0.5) / probe_directions;
      Vector v(2);
      v << std::cos(ang), std::sin(ang);
      probes.push_back(v);
    }
  }

  auto sample_coord = [m](int i) { return (i + 0.5) / m; };

  // Sample a tensor lattice over (y1, y2, s1, s2); in 2D use the same 1D
  // sample list per component to keep the sweep affordable.
  int spatial_points = (n == 1) ? m : m * m;
  auto spatial_sample = [&](int idx) {
    Vector v(n);
    if (n == 1) {
      v[0] = sample_coord(idx);
    } else {
      v[0] = sample_coord(idx % m);
      v[1] = sample_coord(idx / m);
    }
    return v;
  };

  for (int iy1 = 0; iy1 < spatial_points; ++iy1) {
    Vector y1 = spatial_sample(iy1);
    for (int iy2 = 0; iy2 < spatial_points; ++iy2) {
      Vector y2 = spatial_sample(iy2);
      for (int i1 = 0; i1 < m; ++i1) {
        double s1 = sample_coord(i1);
        for (int i2 = 0; i2 < m; ++i2) {
          double s2 = sample_coord(i2);
          Matrix a = eval_coefficient(field, y1, y2, s1, s2);
          report.max_entry = std::max(report.max_entry, a.cwiseAbs().maxCoeff());
          for (const Vector& xi : probes) {
            double ratio = xi.dot(a * xi) / xi.squaredNorm();
            if (ratio < report.worst_coercivity_ratio) {
              report.worst_coercivity_ratio = ratio;
              if (ratio < field.coercivity * (1.0 - 1e-9)) {
                std::ostringstream os;
                os << "y1=(" << y1.transpose() << ") y2=(" << y2.transpose() << ") s1=" << s1
                   << " s2=" << s2;
                report.failure_point = os.str();
              }
            }
          }
          // Periodicity defect: shift each argument by one period.
          Vector ones = Vector::Ones(n);
          double defect = 0.0;
          defect = std::max(defect,
                            (eval_coefficient(field, y1 + ones, y2, s1, s2) - a).cwiseAbs().maxCoeff());
          defect = std::max(defect,
                            (eval_coefficient(field, y1, y2 + ones, s1, s2) - a).cwiseAbs().maxCoeff());
          defect = std::max(defect,
                            (eval_coefficient(field, y1, y2, s1 + 1.0, s2) - a).cwiseAbs().maxCoeff());
          defect = std::max(defect,
                            (eval_coefficient(field, y1, y2, s1, s2 + 1.0) - a).cwiseAbs().maxCoeff());
          report.periodicity_defect = std::max(report.periodicity_defect, defect);
        }
      }
    }
  }

  report.passed = report.worst_coercivity_ratio >= field.coercivity * (1.0 - 1e-9) &&
                  report.periodicity_defect <= 1e-12 && report.max_entry <= field.entry_bound;
  return report;
}

CoefficientField make_constant_field(const Matrix& a0) {
  if (a0.rows() != a0.cols() || a0.rows() < 1 || a0.rows() > 2)
    throw ValidationError("constant field: matrix must be NxN with N in {1,2}");
  CoefficientField f;
  f.dimension = static_cast<int>(a0.rows());
  Matrix a = a0;
  f.evaluator = [a](const Vector&, const Vector&, double, double) { return a; };
  f.coercivity = min_symmetric_eigenvalue(a0);
  if (f.coercivity <= 0.0) throw ValidationError("constant field: matrix is not coercive");
  f.entry_bound = a0.cwiseAbs().maxCoeff();
  f.family = CoefficientFamily::Constant;
  return f;
}

CoefficientField make_trigonometric_field(int dimension, const std::vector<TrigVariable>& vars) {
  if (dimension < 1 || dimension > 2) throw ValidationError("trigonometric field: N in {1,2}");
  CoefficientField f;
  f.dimension = dimension;
  double c0 = 1.0, bound = 1.0;
  for (const auto& v : vars) {
    if (v.component < 0 || v.component >= dimension)
      throw ValidationError("trigonometric field: component out of range");
    if (v.factor.min_value() <= 0.0)
      throw ValidationError("trigonometric field: a factor is not strictly positive");
    c0 *= v.factor.min_value();
    bound *= v.factor.max_value();
  }
  std::vector<TrigVariable> vs = vars;
  int n = dimension;
  f.evaluator = [vs, n](const Vector& y1, const Vector& y2, double s1, double s2) {
    double value = 1.0;
    for (const auto& v : vs) {
      double u = 0.0;
      switch (v.kind) {
        case TrigVariable::Kind::Y1: u = y1[v.component]; break;
        case TrigVariable::Kind::Y2: u = y2[v.component]; break;
        case TrigVariable::Kind::S1: u = s1; break;
        case TrigVariable::Kind::S2: u = s2; break;
      }
      value *= v.factor(u);
    }
    return Matrix(value * Matrix::Identity(n, n));
  };
  f.coercivity = c0;
  f.entry_bound = bound;
  f.family = CoefficientFamily::Trigonometric;
  return f;
}

CoefficientField make_separable_field(int dimension, SeparableFactor f_y1, SeparableFactor f_y2,
                                      SeparableFactor g_s1, SeparableFactor g_s2, int y1_component,
                                      int y2_component) {
  if (dimension < 1 || dimension > 2) throw ValidationError("separable field: N in {1,2}");
  for (const auto& fac : {f_y1, f_y2, g_s1, g_s2})
    if (fac.min_value() <= 0.0)
      throw ValidationError("separable field: a factor is not strictly positive");
  CoefficientField f;
  f.dimension = dimension;
  int n = dimension;
  f.evaluator = [=](const Vector& y1, const Vector& y2, double s1, double s2) {
    double value = f_y1(y1[y1_component]) * f_y2(y2[y2_component]) * g_s1(s1) * g_s2(s2);
    return Matrix(value * Matrix::Identity(n, n));
  };
  f.coercivity =
      f_y1.min_value() * f_y2.min_value() * g_s1.min_value() * g_s2.min_value();
  f.entry_bound = f_y1.max_value() * f_y2.max_value() * g_s1.max_value() * g_s2.max_value();
  f.family = CoefficientFamily::SeparableProduct;
  return f;
}

CoefficientField make_layered_field(int dimension, bool on_y2, int component,
                                    const std::vector<double>& breaks,
                                    const std::vector<double>& values) {
  if (dimension < 1 || dimension > 2) throw ValidationError("layered field: N in {1,2}");
  if (breaks.empty() || values.size() != breaks.size() + 1)
    throw ValidationError("layered field: need k breaks and k+1 values");
  for (size_t i = 0; i < breaks.size(); ++i) {
    if (breaks[i] <= 0.0 || breaks[i] >= 1.0 || (i > 0 && breaks[i] <= breaks[i - 1]))
      throw ValidationError("layered field: breaks must be strictly increasing in (0,1)");
  }
  double c0 = values[0], bound = values[0];
  for (double v : values) {
    if (v <= 0.0) throw ValidationError("layered field: values must be positive");
    c0 = std::min(c0, v);
    bound = std::max(bound, v);
  }
  CoefficientField f;
  f.dimension = dimension;
  int n = dimension;
  std::vector<double> br = breaks, vals = values;
  f.evaluator = [br, vals, on_y2, component, n](const Vector& y1, const Vector& y2, double,
                                                double) {
    double u = on_y2 ? y2[component] : y1[component];
    size_t k = 0;
    while (k < br.size() && u >= br[k]) ++k;
    return Matrix(vals[k] * Matrix::Identity(n, n));
  };
  f.coercivity = c0;
  f.entry_bound = bound;
  f.family = CoefficientFamily::Layered;
  if (on_y2)
    f.y2_breaks = breaks;
  else
    f.y1_breaks = breaks;
  return f;
}

CoefficientField make_expression_field(int dimension,
                                       const std::vector<std::vector<std::string>>& entries,
                                       double declared_coercivity, double declared_bound) {
  if (dimension < 1 || dimension > 2) throw ValidationError("expression field: N in {1,2}");
  if (static_cast<int>(entries.size()) != dimension)
    throw ValidationError("expression field: entry matrix must be NxN");
  std::vector<std::vector<Expression>> compiled(dimension);
  for (int i = 0; i < dimension; ++i) {
    if (static_cast<int>(entries[i].size()) != dimension)
      throw ValidationError("expression field: entry matrix must be NxN");
    for (int j = 0; j < dimension; ++j)
      compiled[i].push_back(Expression::parse(entries[i][j], dimension));
  }
  if (declared_coercivity <= 0.0)
    throw ValidationError("expression field: declared coercivity must be positive");
  CoefficientField f;
  f.dimension = dimension;
  int n = dimension;
  f.evaluator = [compiled, n](const Vector& y1, const Vector& y2, double s1, double s2) {
    ExprArgs args{&y1, &y2, s1, s2};
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = compiled[i][j](args);
    return a;
  };
  f.coercivity = declared_coercivity;
  f.entry_bound = declared_bound;
  f.family = CoefficientFamily::Expression;
  return f;
}

} // namespace homog
