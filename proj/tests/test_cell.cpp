#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "homog/cell.hpp"

using namespace homog;

namespace {

const double kSqrt3 = 1.7320508075688772; // 1 / integral of 1/(2+sin 2 pi y)

Matrix scalar1(double v) { return v * Matrix::Identity(1, 1); }

SpatialCoefficient trig1d() {
  return [](const Vector& y) { return scalar1(2.0 + std::sin(2.0 * M_PI * y[0])); };
}

} // namespace

TEST_CASE("constant coefficient gives a zero corrector and flux c e_j") {
  CellGrid grid{1, 16, 16};
  CellCorrector w = solve_elliptic_cell([](const Vector&) { return scalar1(2.5); }, 1, 0, grid,
                                        1e-10);
  CHECK(w.values.cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(w.flux[0] == doctest::Approx(2.5).epsilon(1e-12));

  CellGrid grid2{2, 8, 8};
  Matrix a0 = Matrix::Zero(2, 2);
  a0 << 2.0, 0.0, 0.0, 3.0;
  for (int j = 0; j < 2; ++j) {
    CellCorrector c =
        solve_elliptic_cell([&](const Vector&) { return a0; }, 2, j, grid2, 1e-10);
    CHECK(c.values.cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(c.flux[j] == doctest::Approx(a0(j, j)).epsilon(1e-12));
  }
}

TEST_CASE("1D trigonometric cell reproduces the harmonic mean sqrt(3)") {
  CellGrid grid{1, 256, 4};
  CellCorrector w = solve_elliptic_cell(trig1d(), 1, 0, grid, 1e-10);
  CHECK(w.flux[0] == doctest::Approx(kSqrt3).epsilon(1e-6));
  // mean-zero invariant
  CHECK(std::abs(w.values.mean()) <= 1e-12 * (w.values.norm() + 1.0));
}

TEST_CASE("two-layer cell reproduces the harmonic mean 1.6") {
  CellGrid grid{1, 64, 4}; // even node count aligns with the break at 1/2
  auto layered = [](const Vector& y) { return scalar1(y[0] < 0.5 ? 1.0 : 4.0); };
  CellCorrector w = solve_elliptic_cell(layered, 1, 0, grid, 1e-10);
  CHECK(w.flux[0] == doctest::Approx(1.6).epsilon(1e-12));
}

TEST_CASE("1D Voigt-Reuss sandwich") {
  CellGrid grid{1, 128, 4};
  CellCorrector w = solve_elliptic_cell(trig1d(), 1, 0, grid, 1e-10);
  // harmonic mean sqrt(3) <= flux <= arithmetic mean 2
  CHECK(w.flux[0] >= kSqrt3 - 1e-6);
  CHECK(w.flux[0] <= 2.0 + 1e-12);
}

TEST_CASE("2D laminate gives harmonic mean across and arithmetic mean along") {
  CellGrid grid{2, 64, 4};
  auto laminate = [](const Vector& y) {
    return Matrix((2.0 + std::sin(2.0 * M_PI * y[0])) * Matrix::Identity(2, 2));
  };
  std::vector<CellCorrector> correctors;
  for (int j = 0; j < 2; ++j)
    correctors.push_back(solve_elliptic_cell(laminate, 2, j, grid, 1e-10));
  Matrix tensor = cell_flux_tensor(correctors);
  CHECK(tensor(0, 0) == doctest::Approx(kSqrt3).epsilon(1e-6));
  CHECK(tensor(1, 1) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(std::abs(tensor(0, 1)) <= 1e-8);
  CHECK(std::abs(tensor(1, 0)) <= 1e-8);
}

TEST_CASE("mesh convergence of the 2D flux is at least order 1.8") {
  auto field = [](const Vector& y) {
    return Matrix((2.0 + std::sin(2.0 * M_PI * y[0])) * (2.0 + std::sin(2.0 * M_PI * y[1])) *
                  Matrix::Identity(2, 2));
  };
  auto flux11 = [&](int nodes) {
    CellGrid grid{2, nodes, 4};
    return solve_elliptic_cell(field, 2, 0, grid, 1e-11).flux[0];
  };
  double reference = flux11(192);
  double e16 = std::abs(flux11(16) - reference);
  double e32 = std::abs(flux11(32) - reference);
  double e64 = std::abs(flux11(64) - reference);
  double rate1 = std::log2(e16 / e32);
  double rate2 = std::log2(e32 / e64);
  CAPTURE(e16);
  CAPTURE(e32);
  CAPTURE(e64);
  CHECK(0.5 * (rate1 + rate2) >= 1.8);
}

TEST_CASE("time-independent parabolic cell matches the elliptic corrector") {
  CellGrid grid{1, 64, 16};
  CellCorrector elliptic = solve_elliptic_cell(trig1d(), 1, 0, grid, 1e-11);
  CellCorrector parabolic = solve_periodic_parabolic_cell(
      [](const Vector& y, double) { return scalar1(2.0 + std::sin(2.0 * M_PI * y[0])); }, 1, 0,
      grid, 1e-11);
  for (const Vector& slice : parabolic.slices)
    CHECK((slice - elliptic.values).norm() <= 1e-8);
  CHECK(parabolic.flux[0] == doctest::Approx(elliptic.flux[0]).epsilon(1e-9));
  CHECK(parabolic.periodicity_defect <= 1e-8);
}

TEST_CASE("parabolic cell on a constant coefficient returns the zero corrector") {
  CellGrid grid{1, 16, 8};
  CellCorrector w = solve_periodic_parabolic_cell(
      [](const Vector&, double) { return scalar1(3.0); }, 1, 0, grid, 1e-10);
  CHECK(w.values.cwiseAbs().maxCoeff() <= 1e-10);
  CHECK(w.flux[0] == doctest::Approx(3.0).epsilon(1e-10));
}

TEST_CASE("separable space-time coefficient: flux is 2 sqrt(3)") {
  // a(y,s) = (2+sin 2 pi y)(2+sin 2 pi s): the elliptic corrector solves the
  // parabolic problem exactly, so the time-averaged flux factorizes
  CellGrid grid{1, 128, 64};
  CellCorrector w = solve_periodic_parabolic_cell(
      [](const Vector& y, double s) {
        return scalar1((2.0 + std::sin(2.0 * M_PI * y[0])) * (2.0 + std::sin(2.0 * M_PI * s)));
      },
      1, 0, grid, 1e-11);
  CHECK(w.flux[0] == doctest::Approx(2.0 * kSqrt3).epsilon(1e-5));
}

TEST_CASE("flux tensor requires a complete, ordered direction set") {
  CellGrid grid{2, 8, 4};
  std::vector<CellCorrector> only_one;
  only_one.push_back(
      solve_elliptic_cell([](const Vector&) { return Matrix(Matrix::Identity(2, 2)); }, 2, 0,
                          grid, 1e-10));
  CHECK_THROWS_AS(cell_flux_tensor(only_one), ValidationError);
}
