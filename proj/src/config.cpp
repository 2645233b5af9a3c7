#include "homog/config.hpp"

#include <cmath>
#include <fstream>

namespace homog {

using nlohmann::json;

namespace {

double get_number(const json& j, const std::string& key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number())
    throw ValidationError("config: '" + key + "' must be a number");
  return j.at(key).get<double>();
}

int get_int(const json& j, const std::string& key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number_integer())
    throw ValidationError("config: '" + key + "' must be an integer");
  return j.at(key).get<int>();
}

bool get_bool(const json& j, const std::string& key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean())
    throw ValidationError("config: '" + key + "' must be a boolean");
  return j.at(key).get<bool>();
}

SeparableFactor parse_factor(const json& j, const std::string& where) {
  SeparableFactor f;
  f.offset = get_number(j, "offset", 2.0);
  f.amplitude = get_number(j, "amplitude", 1.0);
  f.frequency = get_int(j, "frequency", 1);
  if (f.frequency < 1) throw ValidationError("config: " + where + ".frequency must be >= 1");
  std::string trig = j.value("trig", std::string("sin"));
  if (trig != "sin" && trig != "cos")
    throw ValidationError("config: " + where + ".trig must be 'sin' or 'cos'");
  f.use_cos = trig == "cos";
  return f;
}

CoefficientField parse_field(const json& j, int dimension) {
  if (!j.is_object() || !j.contains("family"))
    throw ValidationError("config: 'coefficient' must declare a 'family'");
  std::string family = j.at("family").get<std::string>();

  if (family == "constant") {
    if (!j.contains("matrix")) throw ValidationError("config: constant family needs 'matrix'");
    const json& m = j.at("matrix");
    if (!m.is_array() || static_cast<int>(m.size()) != dimension)
      throw ValidationError("config: 'matrix' must be a " + std::to_string(dimension) + "x" +
                            std::to_string(dimension) + " array");
    Matrix a0(dimension, dimension);
    for (int i = 0; i < dimension; ++i) {
      const json& row = m.at(static_cast<size_t>(i));
      if (!row.is_array() || static_cast<int>(row.size()) != dimension)
        throw ValidationError("config: 'matrix' rows must have length " +
                              std::to_string(dimension));
      for (int c = 0; c < dimension; ++c) a0(i, c) = row.at(static_cast<size_t>(c)).get<double>();
    }
    return make_constant_field(a0);
  }

  if (family == "trigonometric") {
    if (!j.contains("variables") || !j.at("variables").is_array())
      throw ValidationError("config: trigonometric family needs a 'variables' array");
    std::vector<TrigVariable> vars;
    for (const json& v : j.at("variables")) {
      TrigVariable tv;
      std::string kind = v.value("kind", std::string());
      if (kind == "y1") tv.kind = TrigVariable::Kind::Y1;
      else if (kind == "y2") tv.kind = TrigVariable::Kind::Y2;
      else if (kind == "s1") tv.kind = TrigVariable::Kind::S1;
      else if (kind == "s2") tv.kind = TrigVariable::Kind::S2;
      else throw ValidationError("config: variable kind must be one of y1,y2,s1,s2");
      tv.component = get_int(v, "component", 0);
      if (tv.component < 0 || tv.component >= dimension)
        throw ValidationError("config: variable component out of range");
      tv.factor = parse_factor(v, "variables[]");
      vars.push_back(tv);
    }
    return make_trigonometric_field(dimension, vars);
  }

  if (family == "separable") {
    SeparableFactor one{1.0, 0.0, 1, false};
    auto pick = [&](const char* key) {
      return j.contains(key) ? parse_factor(j.at(key), key) : one;
    };
    return make_separable_field(dimension, pick("y1"), pick("y2"), pick("s1"), pick("s2"),
                                get_int(j, "y1_component", 0), get_int(j, "y2_component", 0));
  }

  if (family == "layered") {
    if (!j.contains("breaks") || !j.contains("values"))
      throw ValidationError("config: layered family needs 'breaks' and 'values'");
    std::vector<double> breaks = j.at("breaks").get<std::vector<double>>();
    std::vector<double> values = j.at("values").get<std::vector<double>>();
    return make_layered_field(dimension, get_bool(j, "on_y2", true),
                              get_int(j, "component", 0), breaks, values);
  }

  if (family == "expression") {
    if (!j.contains("entries"))
      throw ValidationError("config: expression family needs 'entries'");
    std::vector<std::vector<std::string>> entries =
        j.at("entries").get<std::vector<std::vector<std::string>>>();
    double c0 = get_number(j, "coercivity", 0.0);
    double bound = get_number(j, "entry_bound", 0.0);
    if (c0 <= 0.0 || bound <= 0.0)
      throw ValidationError(
          "config: expression family must declare positive 'coercivity' and 'entry_bound'");
    return make_expression_field(dimension, entries, c0, bound);
  }

  throw ValidationError("config: unknown coefficient family '" + family + "'");
}

std::function<double(const Vector&, double)> parse_source(const json& j, const Vector& lengths,
                                                          int dimension, std::string& desc) {
  json block = j.is_object() ? j : json{{"kind", "constant"}, {"value", 1.0}};
  std::string kind = block.value("kind", std::string("constant"));
  double value = get_number(block, "value", 1.0);
  if (kind == "constant") {
    desc = "constant " + std::to_string(value);
    return [value](const Vector&, double) { return value; };
  }
  if (kind == "bump") {
    // value * prod_d sin(pi x_d / L_d)
    desc = "bump " + std::to_string(value);
    Vector len = lengths.size() ? lengths : Vector(Vector::Ones(dimension));
    return [value, len, dimension](const Vector& x, double) {
      double v = value;
      for (int d = 0; d < dimension; ++d) v *= std::sin(M_PI * x[d] / len[d]);
      return v;
    };
  }
  throw ValidationError("config: source kind must be 'constant' or 'bump'");
}

std::function<double(const Vector&)> parse_initial(const json& j, const Vector& lengths,
                                                   int dimension, std::string& desc) {
  json block = j.is_object() ? j : json{{"kind", "zero"}};
  std::string kind = block.value("kind", std::string("zero"));
  if (kind == "zero") {
    desc = "zero";
    return [](const Vector&) { return 0.0; };
  }
  if (kind == "bump") {
    double value = get_number(block, "value", 1.0);
    desc = "bump " + std::to_string(value);
    Vector len = lengths.size() ? lengths : Vector(Vector::Ones(dimension));
    return [value, len, dimension](const Vector& x) {
      double v = value;
      for (int d = 0; d < dimension; ++d) v *= std::sin(M_PI * x[d] / len[d]);
      return v;
    };
  }
  throw ValidationError("config: initial kind must be 'zero' or 'bump'");
}

} // namespace

double parse_exponent(const json& j, const std::string& name) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    size_t slash = s.find('/');
    try {
      if (slash == std::string::npos) return std::stod(s);
      size_t used_n = 0, used_d = 0;
      double num = std::stod(s.substr(0, slash), &used_n);
      double den = std::stod(s.substr(slash + 1), &used_d);
      if (used_n != slash || used_d != s.size() - slash - 1 || den == 0.0)
        throw ValidationError("");
      return num / den;
    } catch (const std::exception&) {
      throw ValidationError("config: exponent '" + name + "' must be a number or 'a/b', got '" +
                            s + "'");
    }
  }
  throw ValidationError("config: exponent '" + name + "' must be a number or rational string");
}

RunConfig parse_run_config(const json& j) {
  if (!j.is_object()) throw ValidationError("config: top level must be a JSON object");
  RunConfig cfg;
  cfg.dimension = get_int(j, "dimension", 1);
  if (cfg.dimension < 1 || cfg.dimension > 2)
    throw ValidationError("config: dimension must be 1 or 2");

  if (!j.contains("coefficient")) throw ValidationError("config: missing 'coefficient'");
  cfg.coefficient_json = j.at("coefficient");
  cfg.field = parse_field(cfg.coefficient_json, cfg.dimension);

  if (!j.contains("exponents")) throw ValidationError("config: missing 'exponents'");
  const json& e = j.at("exponents");
  for (const char* k : {"p", "q", "r"})
    if (!e.contains(k)) throw ValidationError(std::string("config: exponents need '") + k + "'");
  cfg.exponents.p = parse_exponent(e.at("p"), "p");
  cfg.exponents.q = parse_exponent(e.at("q"), "q");
  cfg.exponents.r = parse_exponent(e.at("r"), "r");
  cfg.exponents.validate();

  json cell = j.value("cell", json::object());
  cfg.numerics.inner_grid.dimension = cfg.dimension;
  cfg.numerics.inner_grid.nodes_per_axis = get_int(cell, "inner_nodes", 32);
  cfg.numerics.inner_grid.time_steps = get_int(cell, "inner_time_steps", 32);
  cfg.numerics.outer_grid.dimension = cfg.dimension;
  cfg.numerics.outer_grid.nodes_per_axis = get_int(cell, "outer_nodes", 32);
  cfg.numerics.outer_grid.time_steps = get_int(cell, "outer_time_steps", 32);
  cfg.numerics.lattice.s1_samples = get_int(cell, "s1_samples", 8);
  cfg.numerics.lattice.s2_samples = get_int(cell, "s2_samples", 8);
  cfg.numerics.cell_tol = get_number(cell, "tol", 1e-9);
  cfg.numerics.pre_average_points = get_int(cell, "pre_average_points", 32);
  if (cfg.numerics.cell_tol <= 0.0) throw ValidationError("config: cell.tol must be positive");
  cfg.numerics.inner_grid.validate();
  cfg.numerics.outer_grid.validate();
  cfg.numerics.lattice.validate();

  if (j.contains("lengths")) {
    std::vector<double> len = j.at("lengths").get<std::vector<double>>();
    if (static_cast<int>(len.size()) != cfg.dimension)
      throw ValidationError("config: 'lengths' must have one entry per dimension");
    cfg.lengths = Eigen::Map<const Vector>(len.data(), static_cast<Eigen::Index>(len.size()));
    if (cfg.lengths.minCoeff() <= 0.0) throw ValidationError("config: lengths must be positive");
  }
  cfg.horizon = get_number(j, "horizon", 1.0);
  if (cfg.horizon <= 0.0) throw ValidationError("config: horizon must be positive");

  json macro = j.value("macro", json::object());
  cfg.macro_mesh.dimension = cfg.dimension;
  cfg.macro_mesh.lengths = cfg.lengths;
  cfg.macro_mesh.cells_per_axis = get_int(macro, "cells_per_axis", 64);
  if (macro.contains("time_samples"))
    cfg.macro_mesh.time_samples = macro.at("time_samples").get<std::vector<double>>();
  cfg.macro_tol = get_number(macro, "tol", 1e-10);
  if (cfg.macro_tol <= 0.0) throw ValidationError("config: macro.tol must be positive");
  cfg.macro_mesh.validate();

  cfg.source = parse_source(j.value("source", json()), cfg.lengths, cfg.dimension,
                            cfg.source_desc);
  cfg.initial = parse_initial(j.value("initial", json()), cfg.lengths, cfg.dimension,
                              cfg.initial_desc);

  json fine = j.value("fine", json::object());
  if (fine.contains("eps_list")) {
    cfg.eps_list = fine.at("eps_list").get<std::vector<double>>();
    for (size_t i = 0; i < cfg.eps_list.size(); ++i) {
      double eps = cfg.eps_list[i];
      if (!(eps > 0.0 && eps < 1.0))
        throw ValidationError("config: fine.eps_list entries must lie in (0,1)");
      if (i && !(eps < cfg.eps_list[i - 1]))
        throw ValidationError("config: fine.eps_list must be strictly decreasing");
    }
  }
  cfg.fine_params.resolution_factor = get_number(fine, "resolution_factor", 8.0);
  cfg.fine_params.step_budget = get_number(fine, "step_budget", 1e7);
  cfg.fine_params.tol = get_number(fine, "tol", 1e-10);
  if (cfg.fine_params.tol <= 0.0) throw ValidationError("config: fine.tol must be positive");
  if (cfg.fine_params.step_budget <= 0.0)
    throw ValidationError("config: fine.step_budget must be positive");
  cfg.tail_fraction = get_number(fine, "tail_fraction", 0.1);
  if (cfg.tail_fraction < 0.0 || cfg.tail_fraction >= 1.0)
    throw ValidationError("config: fine.tail_fraction must lie in [0,1)");

  cfg.dump_intermediate = get_bool(j, "dump_intermediate", false);
  cfg.very_weak_probe = get_bool(j, "very_weak_probe", true);
  cfg.output_dir = j.value("output_dir", std::string("out"));
  cfg.workers = get_int(j, "workers", 1);
  if (cfg.workers < 1) throw ValidationError("config: workers must be >= 1");
  cfg.numerics.workers = cfg.workers;
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError("config: JSON parse error in " + path + ": " + e.what());
  }
  return parse_run_config(j);
}

} // namespace homog
