#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "homog/finescale.hpp"

using namespace homog;

namespace {

FineScaleProblem unit_problem() {
  FineScaleProblem p;
  p.field = make_constant_field(Matrix::Identity(1, 1));
  p.exponents = ScaleExponents{1.0, 2.0, 2.5};
  p.source = [](const Vector&, double) { return 1.0; };
  p.initial = [](const Vector&) { return 0.0; };
  p.horizon = 1.0;
  return p;
}

} // namespace

TEST_CASE("zero data gives the zero solution") {
  FineScaleProblem p = unit_problem();
  p.source = [](const Vector&, double) { return 0.0; };
  FineScaleSolution u = solve_fine(p, 0.5, FineMeshParams{});
  for (const Vector& slice : u.values) CHECK(slice.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("solution is linear in the source") {
  FineScaleProblem p = unit_problem();
  FineScaleSolution u1 = solve_fine(p, 0.5, FineMeshParams{});
  p.source = [](const Vector&, double) { return 2.0; };
  FineScaleSolution u2 = solve_fine(p, 0.5, FineMeshParams{});
  double rel = 0.0;
  for (size_t k = 0; k < u1.values.size(); ++k)
    rel = std::max(rel, (u2.values[k] - 2.0 * u1.values[k]).cwiseAbs().maxCoeff());
  CHECK(rel <= 1e-10);
}

TEST_CASE("constant-coefficient terminal slice approaches the Poisson profile") {
  // eps^p d_t u - u_xx = 1 reaches its steady state x(1-x)/2 well before T=1
  FineScaleProblem p = unit_problem();
  FineScaleSolution u = solve_fine(p, 0.5, FineMeshParams{});
  fem::Grid g = u.fem_grid();
  double worst = 0.0;
  for (int i = 0; i < g.node_count(); ++i) {
    double x = g.node_coord(i)[0];
    worst = std::max(worst, std::abs(u.values.back()[i] - 0.5 * x * (1.0 - x)));
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("resolution and budget accounting") {
  FineScaleProblem p = unit_problem();
  FineScaleSolution u = solve_fine(p, 0.5, FineMeshParams{});
  CHECK(u.h <= 0.25 / 8.0 + 1e-15);
  CHECK(u.dt <= std::pow(0.5, 2.5) / 8.0 + 1e-15);
  CHECK(u.resolution_factor >= 8.0);

  FineMeshParams weak;
  weak.resolution_factor = 4.0;
  CHECK_THROWS_AS(solve_fine(p, 0.5, weak), ValidationError);

  // a tiny eps overflows the default budget; the message names the minimal
  // admissible value
  try {
    solve_fine(p, 1e-3, FineMeshParams{});
    FAIL("expected refusal");
  } catch (const ValidationError& e) {
    CHECK(std::string(e.what()).find("minimal admissible eps") != std::string::npos);
  }
}

TEST_CASE("implicit Euler dissipates energy without a source") {
  FineScaleProblem p = unit_problem();
  p.source = [](const Vector&, double) { return 0.0; };
  p.initial = [](const Vector& x) { return std::sin(M_PI * x[0]); };
  FineScaleSolution u = solve_fine(p, 0.5, FineMeshParams{});
  double prev = u.values.front().norm();
  for (size_t k = 1; k < u.values.size(); ++k) {
    double cur = u.values[k].norm();
    CHECK(cur <= prev + 1e-14);
    prev = cur;
  }
}

TEST_CASE("l2_error on trivial cases") {
  FineScaleProblem p = unit_problem();
  p.source = [](const Vector&, double) { return 0.0; };
  FineScaleSolution zero_run = solve_fine(p, 0.5, FineMeshParams{});

  MacroSolution zero_macro;
  zero_macro.mesh.dimension = 1;
  zero_macro.mesh.cells_per_axis = 8;
  zero_macro.times = {0.0};
  zero_macro.values = {Vector::Zero(zero_macro.mesh.fem_grid().node_count())};

  CHECK(l2_error(zero_run, zero_macro, ErrorWindow::FullTime) == 0.0);

  // u_eps = 1 on the whole cylinder vs u = 0: the norm is 1
  FineScaleSolution ones = zero_run;
  for (Vector& slice : ones.values) slice.setOnes();
  CHECK(l2_error(ones, zero_macro, ErrorWindow::FullTime) ==
        doctest::Approx(1.0).epsilon(1e-12));

  // tail window shortens the time interval accordingly
  CHECK(l2_error(ones, zero_macro, ErrorWindow::TailOnly, 0.19) ==
        doctest::Approx(std::sqrt(0.81)).epsilon(1e-9));

  CHECK_THROWS_AS(l2_error(ones, zero_macro, ErrorWindow::TailOnly, 1.0), ValidationError);
}

TEST_CASE("discrete H1 norm is recorded and finite") {
  FineScaleProblem p = unit_problem();
  FineScaleSolution u = solve_fine(p, 0.5, FineMeshParams{});
  CHECK(u.h1_norm > 0.0);
  CHECK(std::isfinite(u.h1_norm));
}
