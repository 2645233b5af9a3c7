#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

namespace homog {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thrown when input data or configuration violates a precondition.
class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Thrown when a linear or fixed-point solve fails to reach its tolerance.
class SolverError : public std::runtime_error {
public:
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Wrap a coordinate into [0,1). Exact integers map to 0.
inline double wrap_unit(double x) {
  double w = x - std::floor(x);
  return (w == 1.0) ? 0.0 : w;
}

inline Vector wrap_unit(const Vector& x) {
  Vector w(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) w[i] = wrap_unit(x[i]);
  return w;
}

/// Minimum eigenvalue of the symmetric part of a square matrix.
inline double min_symmetric_eigenvalue(const Matrix& a) {
  Matrix sym = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  return es.eigenvalues().minCoeff();
}

} // namespace homog
