// Command-line front end: classify / effective / macro / fine / study /
// diagnose, driven by a JSON config (docs/config.schema.json).
#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"

#include "homog/config.hpp"
#include "homog/report.hpp"
#include "homog/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace homog;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitSolver = 3;
constexpr int kExitUsage = 64;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    rows.push_back(row);
  }
  return rows;
}

json axes_json(unsigned axes) {
  json out = json::array();
  if (axes & kAxisS1) out.push_back("s1");
  if (axes & kAxisS2) out.push_back("s2");
  return out;
}

json regime_to_json(const RegimeDescriptor& d) {
  return json{{"case", d.case_index},
              {"pre_average", to_string(d.pre_average)},
              {"inner_problem", to_string(d.inner_type)},
              {"mid_average", axes_json(d.mid_average)},
              {"outer_problem", to_string(d.outer_type)},
              {"final_average", axes_json(d.final_average)},
              {"u1_depends_on", axes_json(d.u1_depends_on)},
              {"u2_depends_on", axes_json(d.u2_depends_on)}};
}

json exponents_json(const ScaleExponents& e) {
  return json{{"p", e.p}, {"q", e.q}, {"r", e.r}};
}

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + path.string());
  out << j.dump(2) << "\n";
}

// timestamps live only here, never in data files
void write_meta(const fs::path& out_dir, const std::string& command) {
  auto now = std::chrono::system_clock::now();
  std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[64];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
  write_json_file(out_dir / "meta.json", json{{"command", command}, {"created", buf}});
}

struct EffectiveArtifacts {
  RegimeDescriptor regime;
  IntermediateCoefficient intermediate;
  EffectiveResult result;
};

EffectiveArtifacts run_effective_pipeline(const RunConfig& cfg) {
  EffectiveArtifacts art;
  art.regime = classify_regime(cfg.exponents);
  CoefficientField prepared =
      pre_average_field(cfg.field, art.regime.pre_average, cfg.numerics.pre_average_points);
  art.intermediate = compute_inner_stage(prepared, art.regime, cfg.numerics);
  art.result = compute_outer_stage(art.intermediate, art.regime, cfg.numerics);
  return art;
}

json effective_to_json(const RunConfig& cfg, const EffectiveArtifacts& art) {
  return json{{"b", matrix_to_json(art.result.tensor.b)},
              {"case", art.result.tensor.case_index},
              {"regime", regime_to_json(art.regime)},
              {"exponents", exponents_json(cfg.exponents)},
              {"coefficient", cfg.coefficient_json},
              {"provenance",
               json{{"inner_nodes", cfg.numerics.inner_grid.nodes_per_axis},
                    {"inner_time_steps", cfg.numerics.inner_grid.time_steps},
                    {"outer_nodes", cfg.numerics.outer_grid.nodes_per_axis},
                    {"outer_time_steps", cfg.numerics.outer_grid.time_steps},
                    {"s1_samples", cfg.numerics.lattice.s1_samples},
                    {"s2_samples", cfg.numerics.lattice.s2_samples},
                    {"cell_tol", cfg.numerics.cell_tol},
                    {"pre_average_points", cfg.numerics.pre_average_points}}}};
}

void dump_intermediate_csv(const fs::path& path, const IntermediateCoefficient& mid) {
  std::vector<std::string> header{"cell", "s1_index", "s2_index"};
  for (int i = 0; i < mid.dimension; ++i)
    for (int c = 0; c < mid.dimension; ++c)
      header.push_back("a" + std::to_string(i + 1) + std::to_string(c + 1));
  std::vector<std::vector<double>> rows;
  for (int e = 0; e < mid.y1_cells; ++e)
    for (int i1 = 0; i1 < mid.n_s1; ++i1)
      for (int i2 = 0; i2 < mid.n_s2; ++i2) {
        std::vector<double> row{static_cast<double>(e), static_cast<double>(i1),
                                static_cast<double>(i2)};
        const Matrix& a = mid.at(e, i1, i2);
        for (int i = 0; i < mid.dimension; ++i)
          for (int c = 0; c < mid.dimension; ++c) row.push_back(a(i, c));
        rows.push_back(std::move(row));
      }
  write_csv(path.string(), header, rows);
}

void dump_correctors_csv(const fs::path& path, const CorrectorSet& correctors) {
  fem::Grid g = correctors.grid.fem_grid();
  std::vector<std::string> header{"direction", "node"};
  for (int d = 0; d < g.dim; ++d) header.push_back("y" + std::to_string(d + 1));
  header.push_back("value");
  std::vector<std::vector<double>> rows;
  for (size_t j = 0; j < correctors.chi1.size(); ++j)
    for (int i = 0; i < g.node_count(); ++i) {
      Vector x = g.node_coord(i);
      std::vector<double> row{static_cast<double>(j + 1), static_cast<double>(i)};
      for (int d = 0; d < g.dim; ++d) row.push_back(x[d]);
      row.push_back(correctors.chi1[j][i]);
      rows.push_back(std::move(row));
    }
  write_csv(path.string(), header, rows);
}

void dump_fine_csv(const fs::path& out_dir, int index, const FineScaleSolution& sol) {
  std::string stem = "fine_eps" + std::to_string(index);
  std::vector<std::string> header{"t", "node", "value"};
  std::vector<std::vector<double>> rows;
  rows.reserve(sol.times.size() * static_cast<size_t>(sol.values.front().size()));
  for (size_t k = 0; k < sol.times.size(); ++k)
    for (Eigen::Index i = 0; i < sol.values[k].size(); ++i)
      rows.push_back({sol.times[k], static_cast<double>(i), sol.values[k][i]});
  write_csv((out_dir / (stem + ".csv")).string(), header, rows);

  json meta{{"eps", sol.eps},
            {"dimension", sol.dimension},
            {"cells_per_axis", sol.cells},
            {"h", sol.h},
            {"dt", sol.dt},
            {"resolution_factor", sol.resolution_factor},
            {"time_steps", sol.times.size() - 1},
            {"h1_norm", sol.h1_norm}};
  if (sol.lengths.size()) {
    json len = json::array();
    for (Eigen::Index d = 0; d < sol.lengths.size(); ++d) len.push_back(sol.lengths[d]);
    meta["lengths"] = len;
  }
  write_json_file(out_dir / (stem + ".json"), meta);
}

MacroSolution run_macro(const RunConfig& cfg, const Matrix& b) {
  MacroMesh mesh = cfg.macro_mesh;
  if (mesh.time_samples.empty()) mesh.time_samples = {cfg.horizon};
  return solve_homogenized(b, cfg.source, mesh, cfg.macro_tol);
}

std::vector<FineScaleSolution> run_fine_list(const RunConfig& cfg) {
  if (cfg.eps_list.empty())
    throw ValidationError("config: fine.eps_list is required for this subcommand");
  FineScaleProblem problem;
  problem.field = cfg.field;
  problem.exponents = cfg.exponents;
  problem.source = cfg.source;
  problem.initial = cfg.initial;
  problem.lengths = cfg.lengths;
  problem.horizon = cfg.horizon;
  std::vector<FineScaleSolution> runs;
  for (double eps : cfg.eps_list) runs.push_back(solve_fine(problem, eps, cfg.fine_params));
  return runs;
}

int cmd_classify(const RunConfig& cfg, const fs::path& out_dir) {
  RegimeDescriptor d = classify_regime(cfg.exponents);
  json result = regime_to_json(d);
  result["exponents"] = exponents_json(cfg.exponents);
  write_json_file(out_dir / "case.json", result);
  std::cout << result.dump(2) << "\n";
  return kExitOk;
}

int cmd_effective(const RunConfig& cfg, const fs::path& out_dir) {
  EffectiveArtifacts art = run_effective_pipeline(cfg);
  json result = effective_to_json(cfg, art);
  write_json_file(out_dir / "effective.json", result);
  if (cfg.dump_intermediate) dump_intermediate_csv(out_dir / "intermediate.csv", art.intermediate);
  if (cfg.dump_correctors) dump_correctors_csv(out_dir / "correctors.csv", art.result.correctors);
  std::cout << result.dump(2) << "\n";
  return kExitOk;
}

int cmd_macro(const RunConfig& cfg, const fs::path& out_dir) {
  EffectiveArtifacts art = run_effective_pipeline(cfg);
  MacroSolution macro = run_macro(cfg, art.result.tensor.b);

  fem::Grid g = macro.mesh.fem_grid();
  std::vector<std::string> header{"t", "node"};
  for (int d = 0; d < g.dim; ++d) header.push_back("x" + std::to_string(d + 1));
  header.push_back("u");
  std::vector<std::vector<double>> rows;
  for (size_t k = 0; k < macro.times.size(); ++k)
    for (int i = 0; i < g.node_count(); ++i) {
      Vector x = g.node_coord(i);
      std::vector<double> row{macro.times[k], static_cast<double>(i)};
      for (int d = 0; d < g.dim; ++d) row.push_back(x[d]);
      row.push_back(macro.values[k][i]);
      rows.push_back(std::move(row));
    }
  write_csv((out_dir / "macro.csv").string(), header, rows);

  json result{{"b", matrix_to_json(art.result.tensor.b)},
              {"case", art.result.tensor.case_index},
              {"cells_per_axis", macro.mesh.cells_per_axis},
              {"times", macro.times},
              {"residuals", macro.residuals},
              {"source", cfg.source_desc}};
  write_json_file(out_dir / "macro.json", result);
  std::cout << result.dump(2) << "\n";
  return kExitOk;
}

int cmd_fine(const RunConfig& cfg, const fs::path& out_dir) {
  std::vector<FineScaleSolution> runs = run_fine_list(cfg);
  for (size_t i = 0; i < runs.size(); ++i) dump_fine_csv(out_dir, static_cast<int>(i), runs[i]);
  json result{{"eps_list", cfg.eps_list}, {"runs", runs.size()}};
  write_json_file(out_dir / "fine.json", result);
  std::cout << result.dump(2) << "\n";
  return kExitOk;
}

int cmd_study(const RunConfig& cfg, const fs::path& out_dir) {
  EffectiveArtifacts art = run_effective_pipeline(cfg);
  MacroSolution macro = run_macro(cfg, art.result.tensor.b);
  std::vector<FineScaleSolution> runs = run_fine_list(cfg);

  double tail_start = cfg.tail_fraction * cfg.horizon;
  std::vector<std::vector<double>> rows;
  std::vector<double> errors;
  for (const FineScaleSolution& run : runs) {
    double err = l2_error(run, macro, ErrorWindow::TailOnly, tail_start);
    errors.push_back(err);
    rows.push_back({run.eps, err, run.h1_norm});
  }
  write_csv((out_dir / "study.csv").string(), {"eps", "l2_error", "h1_norm"}, rows);

  bool monotone = true;
  for (size_t i = 1; i < errors.size(); ++i) monotone = monotone && errors[i] < errors[i - 1];
  json result{{"b", matrix_to_json(art.result.tensor.b)},
              {"case", art.result.tensor.case_index},
              {"eps_list", cfg.eps_list},
              {"l2_errors", errors},
              {"tail_start", tail_start},
              {"strictly_decreasing", monotone}};
  write_json_file(out_dir / "study.json", result);

  PlotSeries series{"tail L2 error", cfg.eps_list, errors};
  write_loglog_svg((out_dir / "study.svg").string(), "Fine-scale convergence", "eps",
                   "L2 error", {series});
  std::cout << result.dump(2) << "\n";
  return kExitOk;
}

int cmd_diagnose(const RunConfig& cfg, const fs::path& out_dir) {
  EffectiveArtifacts art = run_effective_pipeline(cfg);
  MacroSolution macro = run_macro(cfg, art.result.tensor.b);
  std::vector<FineScaleSolution> runs = run_fine_list(cfg);

  MacroFactor v = macro_bubble(cfg.lengths, cfg.dimension);
  TimeFactor c1 = time_bubble(cfg.horizon);

  // the four registry combinations for the time-derivative conditions
  std::vector<ConditionCombo> combos = condition_registry();

  std::vector<std::vector<double>> cond_rows;
  std::vector<PlotSeries> cond_series;
  json cond_json = json::array();
  for (size_t c = 0; c < combos.size(); ++c) {
    std::vector<ConditionRow> table =
        check_time_conditions(runs, v, c1, combos[c].c2, combos[c].c3, cfg.exponents);
    PlotSeries s1{std::string(combos[c].name) + " cond1", {}, {}};
    json entries = json::array();
    for (const ConditionRow& row : table) {
      cond_rows.push_back({static_cast<double>(c), row.eps, row.condition1, row.condition2});
      s1.x.push_back(row.eps);
      s1.y.push_back(std::max(std::abs(row.condition1), 1e-16));
      entries.push_back(json{{"eps", row.eps},
                             {"condition1", row.condition1},
                             {"condition2", row.condition2}});
    }
    cond_series.push_back(std::move(s1));
    cond_json.push_back(json{{"combo", combos[c].name}, {"rows", entries}});
  }
  write_csv((out_dir / "conditions.csv").string(),
            {"combo", "eps", "condition1", "condition2"}, cond_rows);

  // pairing decay against a zero-mean y1 factor
  std::vector<std::vector<double>> pairing_rows;
  PlotSeries pairing_series{"pairing sin(y1)", {}, {}};
  for (const FineScaleSolution& run : runs) {
    OscillatingTest test{v, c1, factor_sin(), factor_one(), factor_one(), factor_one()};
    double value = eval_multiscale_pairing(run, test, cfg.exponents);
    pairing_rows.push_back({run.eps, value});
    pairing_series.x.push_back(run.eps);
    pairing_series.y.push_back(std::max(std::abs(value), 1e-16));
  }
  write_csv((out_dir / "pairings.csv").string(), {"eps", "pairing_sin_y1"}, pairing_rows);

  json result{{"case", art.result.tensor.case_index},
              {"b", matrix_to_json(art.result.tensor.b)},
              {"conditions", cond_json},
              {"macro_factor", v.name},
              {"time_factor", c1.name}};

  if (cfg.very_weak_probe) {
    std::vector<std::vector<double>> probe_rows;
    json probe_json = json::array();
    for (const FineScaleSolution& run : runs) {
      OscillatingTest test{v, c1, factor_sin(), factor_one(), factor_one(), factor_one()};
      VeryWeakProbe probe =
          very_weak_corrector_probe(run, test, cfg.exponents, art.result.correctors, macro);
      probe_rows.push_back({run.eps, probe.measured, probe.predicted, probe.gap()});
      probe_json.push_back(json{{"eps", run.eps},
                                {"measured", probe.measured},
                                {"predicted", probe.predicted},
                                {"gap", probe.gap()}});
    }
    write_csv((out_dir / "probe.csv").string(), {"eps", "measured", "predicted", "gap"},
              probe_rows);
    result["very_weak_probe"] = probe_json;
  }

  std::vector<PlotSeries> plot = cond_series;
  plot.push_back(pairing_series);
  write_loglog_svg((out_dir / "diagnose.svg").string(), "Diagnostic decay", "eps", "|value|",
                   plot);
  write_json_file(out_dir / "diagnose.json", result);
  std::cout << result.dump(2) << "\n";
  return kExitOk;
}

void write_error_file(const fs::path& out_dir, const std::string& code,
                      const std::string& message) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  std::ofstream out(out_dir / "error.json", std::ios::binary);
  if (out) out << json{{"error", json{{"code", code}, {"message", message}}}}.dump(2) << "\n";
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical homogenization toolkit for parabolic problems with "
               "spatial scales eps, eps^2 and temporal scales eps^q, eps^r"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_override;
  int workers = 0;
  long seed = 0; // reserved: no stochastic components at present
  bool dump_correctors = false;
  app.add_option("--config", config_path, "Path to the JSON run configuration")->required();
  app.add_option("--out", out_override, "Output directory (overrides the config)");
  app.add_option("--workers", workers, "Worker-thread count (overrides the config)");
  app.add_option("--seed", seed, "Reserved; accepted for forward compatibility");
  app.add_flag("--dump-correctors", dump_correctors, "Also write correctors.csv");

  std::string subcommand;
  for (const char* name : {"classify", "effective", "macro", "fine", "study", "diagnose"})
    app.add_subcommand(name)->callback([&subcommand, name] { subcommand = name; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  fs::path out_dir = out_override.empty() ? fs::path("out") : fs::path(out_override);
  try {
    RunConfig cfg = load_run_config(config_path);
    if (!out_override.empty()) cfg.output_dir = out_override;
    if (workers > 0) {
      cfg.workers = workers;
      cfg.numerics.workers = workers;
    }
    cfg.dump_correctors = cfg.dump_correctors || dump_correctors;
    out_dir = cfg.output_dir;
    fs::create_directories(out_dir);
    write_meta(out_dir, subcommand);

    if (subcommand == "classify") return cmd_classify(cfg, out_dir);
    if (subcommand == "effective") return cmd_effective(cfg, out_dir);
    if (subcommand == "macro") return cmd_macro(cfg, out_dir);
    if (subcommand == "fine") return cmd_fine(cfg, out_dir);
    if (subcommand == "study") return cmd_study(cfg, out_dir);
    if (subcommand == "diagnose") return cmd_diagnose(cfg, out_dir);
    std::cerr << "unknown subcommand\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    write_error_file(out_dir, "validation", e.what());
    return kExitValidation;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    write_error_file(out_dir, "solver", e.what());
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    write_error_file(out_dir, "internal", e.what());
    return kExitSolver;
  }
}
