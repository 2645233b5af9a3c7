#pragma once

#include <string>

#include "homog/types.hpp"

namespace homog {

/// The exponent triple (p, q, r) of the scale lists eps, eps^2 in space and
/// eps^q, eps^r in time. Requires 0 < p < q < r strictly.
struct ScaleExponents {
  double p = 1.0;
  double q = 2.0;
  double r = 3.0;

  void validate() const {
    if (!(0.0 < p && p < q && q < r))
      throw ValidationError("scale exponents must satisfy 0 < p < q < r, got p=" +
                            std::to_string(p) + " q=" + std::to_string(q) +
                            " r=" + std::to_string(r));
  }
};

enum class PreAverage { None, OverS2, OverS1AndS2 };
enum class StageType { Elliptic, ParabolicInS1, ParabolicInS2 };

/// Bitmask over the two fast time axes.
enum TimeAxis : unsigned { kAxisS1 = 1u, kAxisS2 = 2u };

std::string to_string(PreAverage p);
std::string to_string(StageType t);
std::string axes_to_string(unsigned axes);

/// The structural recipe induced by one of the 13 homogenization cases:
/// which time averaging of the coefficient happens before the inner (y2)
/// problem, whether the inner and outer cell problems are elliptic or
/// time-periodic parabolic, which axes are averaged between the stages and
/// after the outer flux, and which fast time variables the correctors retain.
struct RegimeDescriptor {
  int case_index = 0;      // 1..13
  PreAverage pre_average = PreAverage::None;
  StageType inner_type = StageType::Elliptic;
  unsigned mid_average = 0;   // axes averaged between inner and outer stage
  StageType outer_type = StageType::Elliptic;
  unsigned final_average = 0; // axes averaged after the outer flux
  unsigned u1_depends_on = 0; // time axes the slow corrector retains
  unsigned u2_depends_on = 0; // time axes the fast corrector retains
};

/// Classify (p,q,r) into the unique matching case. Exponents within
/// `boundary_tolerance` of r=2+p, r=4+p, q=2+p or q=4+p are treated as
/// exactly on the boundary. Throws ValidationError for invalid exponents.
RegimeDescriptor classify_regime(const ScaleExponents& exponents,
                                 double boundary_tolerance = 1e-12);

} // namespace homog
