#pragma once

#include <string>
#include <vector>

// vendored single-header nlohmann::json
#include "json.hpp"

#include "homog/coefficient_field.hpp"
#include "homog/effective.hpp"
#include "homog/finescale.hpp"
#include "homog/macro.hpp"
#include "homog/regime.hpp"

namespace homog {

/// Everything a run needs, parsed and validated from the JSON config
/// (schema: docs/config.schema.json).
struct RunConfig {
  int dimension = 1;
  CoefficientField field;
  nlohmann::json coefficient_json; // echoed into reports for provenance
  ScaleExponents exponents;

  EffectiveNumerics numerics;

  MacroMesh macro_mesh;
  double macro_tol = 1e-10;

  std::function<double(const Vector&, double)> source;
  std::string source_desc;
  std::function<double(const Vector&)> initial;
  std::string initial_desc;

  Vector lengths;        // box side lengths (defaults to the unit box)
  double horizon = 1.0;  // T

  std::vector<double> eps_list; // strictly decreasing, in (0,1)
  FineMeshParams fine_params;
  double tail_fraction = 0.1;   // error window starts at tail_fraction * T

  bool dump_intermediate = false;
  bool very_weak_probe = true;  // diagnose: include the corrector probe

  std::string output_dir = "out";
  int workers = 1;
  bool dump_correctors = false;
};

/// Parse an exponent given as a JSON number or an exact-rational string
/// like "7/2" (so resonance boundaries can be hit exactly).
double parse_exponent(const nlohmann::json& j, const std::string& name);

RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

} // namespace homog
