#pragma once

#include <functional>
#include <string>
#include <vector>

#include "homog/effective.hpp"
#include "homog/finescale.hpp"
#include "homog/macro.hpp"

namespace homog {

/// One scalar factor of an oscillating test function. Periodic factors carry
/// an analytic derivative for the condition diagnostics.
struct TestFactor {
  std::string name = "one";
  std::function<double(double)> value = [](double) { return 1.0; };
  std::function<double(double)> derivative = [](double) { return 0.0; };
  bool zero_mean = false;
  bool trivial = true; // identically 1
};

TestFactor factor_one();
TestFactor factor_sin(int frequency = 1);  // sin(2 pi k u), zero mean
TestFactor factor_cos(int frequency = 1);  // cos(2 pi k u), zero mean

/// Macro-in-space factors v(x) on a box (compactly supported registry).
struct MacroFactor {
  std::string name;
  std::function<double(const Vector&)> value;
};
MacroFactor macro_bubble(const Vector& lengths, int dimension);   // prod x(L-x), normalized
MacroFactor macro_sine_bump(const Vector& lengths, int dimension); // prod sin(pi x/L)

/// Macro-in-time factors c1(t) on (0,T), vanishing at both ends.
struct TimeFactor {
  std::string name;
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};
TimeFactor time_bubble(double horizon);    // (t(T-t)/ (T/2)^2)^2
TimeFactor time_sine_sq(double horizon);   // sin^2(pi t / T)

/// Oscillating test v(x) c1(t) v2(x/eps) v3(x/eps^2) c2(t/eps^q) c3(t/eps^r).
/// Cell factors act on the first coordinate in 2D.
struct OscillatingTest {
  MacroFactor v;
  TimeFactor c1;
  TestFactor v2; // on Y1
  TestFactor v3; // on Y2
  TestFactor c2; // on S1
  TestFactor c3; // on S2
};

/// int_{Omega_T} u_eps * test. Refuses when the fine grid does not resolve
/// the fastest oscillation present (step <= period/8), naming the factor.
double eval_multiscale_pairing(const FineScaleSolution& u_eps, const OscillatingTest& test,
                               const ScaleExponents& exponents);

/// The two time-derivative conditions, with the derivative expanded
/// analytically: per epsilon,
///   cond1 = int u v (eps^r c1' c2 c3 + eps^{r-q} c1 c2' c3 + c1 c2 c3'),
///   cond2 = int u v (eps^q c1' c2 + c1 c2').
struct ConditionRow {
  double eps;
  double condition1;
  double condition2;
};
std::vector<ConditionRow> check_time_conditions(const std::vector<FineScaleSolution>& runs,
                                                const MacroFactor& v, const TimeFactor& c1,
                                                const TestFactor& c2, const TestFactor& c3,
                                                const ScaleExponents& exponents);

/// One named (c2, c3) pair for the condition diagnostics.
struct ConditionCombo {
  std::string name;
  TestFactor c2;
  TestFactor c3;
};

/// The four default (c2, c3) combinations used by the diagnostics. The s1
/// factors are chosen so that their time derivative is resonant with the
/// base harmonic of a trigonometric coefficient (cos at frequency 1) or
/// lives at the doubled frequency (sin at frequency 2): for those
/// quadratures the decay of condition 2 is already visible at moderate eps,
/// while the complementary quadratures are dominated by the slowly rotating
/// lag phase of the solution and only decay much deeper in the asymptotic
/// range.
std::vector<ConditionCombo> condition_registry();

/// Very weak probe: measured = eps^{-1} * pairing of u_eps against
/// v(x) c1(t) v2(x/eps) (v2 zero-mean); predicted = the same pairing of the
/// reconstructed corrector u1 = sum_j d_j u(x,t) chi1_j(y1).
struct VeryWeakProbe {
  double measured;
  double predicted;
  double gap() const { return std::abs(measured - predicted); }
};
VeryWeakProbe very_weak_corrector_probe(const FineScaleSolution& u_eps,
                                        const OscillatingTest& test,
                                        const ScaleExponents& exponents,
                                        const CorrectorSet& correctors,
                                        const MacroSolution& macro_u);

/// Study bookkeeping: per-eps errors, pairing values and condition
/// magnitudes, written out by the CLI.
struct ConvergenceReport {
  std::vector<double> eps_list;          // strictly decreasing
  std::vector<double> l2_errors;
  std::vector<double> h1_norms;
  std::vector<ConditionRow> conditions;  // one row per eps for the default test
};

} // namespace homog
