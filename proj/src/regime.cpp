#include "homog/regime.hpp"

#include <array>

namespace homog {

std::string to_string(PreAverage p) {
  switch (p) {
    case PreAverage::None: return "none";
    case PreAverage::OverS2: return "over_s2";
    case PreAverage::OverS1AndS2: return "over_s1_and_s2";
  }
  return "?";
}

std::string to_string(StageType t) {
  switch (t) {
    case StageType::Elliptic: return "elliptic";
    case StageType::ParabolicInS1: return "parabolic_in_s1";
    case StageType::ParabolicInS2: return "parabolic_in_s2";
  }
  return "?";
}

std::string axes_to_string(unsigned axes) {
  if (axes == 0) return "{}";
  std::string out = "{";
  if (axes & kAxisS1) out += "s1";
  if (axes & kAxisS2) out += (axes & kAxisS1) ? ",s2" : "s2";
  return out + "}";
}

namespace {

// One static row per case. Each row restates the case's pair of local
// problems and final formula as pipeline structure:
//   pre_average   - time averages applied to a before any cell problem
//                   (the cases whose local problems contain int_{S_2} a ds_2
//                   or int_{S^2} a ds^2 inside the divergence),
//   inner_type    - the y2 problem; parabolic when it carries d/ds u2,
//   mid_average   - time axes integrated between the y2 flux and the y1
//                   problem (the extra ds integrals of the second local
//                   problem relative to the first),
//   outer_type    - the y1 problem; parabolic when it carries d/ds u1,
//   final_average - time axes integrated in the final flux formula only.
constexpr std::array<RegimeDescriptor, 13> kRecipes = {{
    // 1: r<2+p. Both local problems elliptic in (y2,s^2)-parameters; the
    //    final formula integrates over all of S^2. u1=u1(s1,s2), u2=u2(s1,s2).
    {1, PreAverage::None, StageType::Elliptic, 0, StageType::Elliptic, kAxisS1 | kAxisS2,
     kAxisS1 | kAxisS2, kAxisS1 | kAxisS2},
    // 2: r=2+p. As case 1, but the y1 problem carries d/ds2 u1.
    {2, PreAverage::None, StageType::Elliptic, 0, StageType::ParabolicInS2, kAxisS1 | kAxisS2,
     kAxisS1 | kAxisS2, kAxisS1 | kAxisS2},
    // 3: 2+p<r<4+p, q<2+p. u1 loses s2; the y1 problem integrates over
    //    Y2 x S2, so s2 is averaged before the outer stage.
    {3, PreAverage::None, StageType::Elliptic, kAxisS2, StageType::Elliptic, kAxisS1, kAxisS1,
     kAxisS1 | kAxisS2},
    // 4: r<4+p, q=2+p. As case 3 with d/ds1 u1 in the y1 problem.
    {4, PreAverage::None, StageType::Elliptic, kAxisS2, StageType::ParabolicInS1, kAxisS1,
     kAxisS1, kAxisS1 | kAxisS2},
    // 5: r<4+p, q>2+p. u1 loses both time variables; the y1 problem
    //    integrates over Y2 x S^2.
    {5, PreAverage::None, StageType::Elliptic, kAxisS1 | kAxisS2, StageType::Elliptic, 0, 0,
     kAxisS1 | kAxisS2},
    // 6: r=4+p, q<2+p. The y2 problem carries d/ds2 u2; the y1 problem
    //    integrates over Y2 x S2.
    {6, PreAverage::None, StageType::ParabolicInS2, kAxisS2, StageType::Elliptic, kAxisS1,
     kAxisS1, kAxisS1 | kAxisS2},
    // 7: r=4+p, q=2+p. Parabolic at both levels (d/ds2 u2 and d/ds1 u1).
    {7, PreAverage::None, StageType::ParabolicInS2, kAxisS2, StageType::ParabolicInS1, kAxisS1,
     kAxisS1, kAxisS1 | kAxisS2},
    // 8: r=4+p, q>2+p. d/ds2 u2 inner; u1 time-independent, so both time
    //    axes are averaged before the y1 problem.
    {8, PreAverage::None, StageType::ParabolicInS2, kAxisS1 | kAxisS2, StageType::Elliptic, 0, 0,
     kAxisS1 | kAxisS2},
    // 9: r>4+p, q<2+p. a enters only through int_{S_2} a ds_2; both cell
    //    problems elliptic with s1 as a parameter.
    {9, PreAverage::OverS2, StageType::Elliptic, 0, StageType::Elliptic, kAxisS1, kAxisS1,
     kAxisS1},
    // 10: r>4+p, q=2+p. As case 9 with d/ds1 u1 in the y1 problem.
    {10, PreAverage::OverS2, StageType::Elliptic, 0, StageType::ParabolicInS1, kAxisS1, kAxisS1,
     kAxisS1},
    // 11: r>4+p, 2+p<q<4+p. As case 9 but u1 loses s1; the y1 problem
    //     integrates over Y2 x S1.
    {11, PreAverage::OverS2, StageType::Elliptic, kAxisS1, StageType::Elliptic, 0, 0, kAxisS1},
    // 12: q=4+p (forces r>4+p). int_{S_2} a ds_2 with d/ds1 u2 in the y2
    //     problem; the y1 problem integrates over Y2 x S1.
    {12, PreAverage::OverS2, StageType::ParabolicInS1, kAxisS1, StageType::Elliptic, 0, 0,
     kAxisS1},
    // 13: q>4+p. a enters only through its full time average; everything
    //     elliptic and time-independent.
    {13, PreAverage::OverS1AndS2, StageType::Elliptic, 0, StageType::Elliptic, 0, 0, 0},
}};

int compare(double lhs, double rhs, double tol) {
  if (std::abs(lhs - rhs) <= tol) return 0;
  return lhs < rhs ? -1 : 1;
}

} // namespace

RegimeDescriptor classify_regime(const ScaleExponents& exponents, double boundary_tolerance) {
  exponents.validate();
  if (boundary_tolerance < 0.0)
    throw ValidationError("classify_regime: boundary tolerance must be >= 0");

  const double p = exponents.p, q = exponents.q, r = exponents.r;
  const int r2 = compare(r, 2.0 + p, boundary_tolerance);
  const int r4 = compare(r, 4.0 + p, boundary_tolerance);
  const int q2 = compare(q, 2.0 + p, boundary_tolerance);
  const int q4 = compare(q, 4.0 + p, boundary_tolerance);

  int index;
  if (r2 < 0) {
    index = 1;
  } else if (r2 == 0) {
    index = 2;
  } else if (r4 < 0) { // 2+p < r < 4+p
    index = q2 < 0 ? 3 : (q2 == 0 ? 4 : 5);
  } else if (r4 == 0) { // r = 4+p
    index = q2 < 0 ? 6 : (q2 == 0 ? 7 : 8);
  } else { // r > 4+p
    if (q2 < 0)
      index = 9;
    else if (q2 == 0)
      index = 10;
    else if (q4 < 0)
      index = 11;
    else if (q4 == 0)
      index = 12;
    else
      index = 13;
  }
  return kRecipes[index - 1];
}

} // namespace homog
