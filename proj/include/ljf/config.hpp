#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "ljf/core.hpp"
#include "ljf/duality.hpp"
#include "ljf/solver.hpp"

namespace ljf {

inline const char* const kTasks[] = {"lowner", "john", "polar", "xi-scan", "duality-check", "counterexample", "mvie",
                                     "oracle"};

struct OracleConfig {
  int a_points = 201;
  int b_points = 201;
  int t_points = 2001;
  int s_points = 2001;
  int samples = 4096;
  int angle_steps = 720;
  int axis_steps = 2000;
};

struct RunConfig {
  std::string task;
  nlohmann::ordered_json function_spec;
  std::optional<LogConcaveFunction> function;
  std::optional<Vec> centre;
  std::optional<SymmetricPolytope> polytope;
  SolverOptions solver;
  DualityTolerances duality;
  OracleConfig oracle;
  int scan_points = 200;
  int plot_points = 201;
  double h_step = 1e-6;
  std::string out_dir = "out";
  bool json_only = false;
};

// Builds a function from its JSON description (fail-closed on unknown keys).
LogConcaveFunction parse_function(const nlohmann::ordered_json& spec);
// Presets with an explicit spelling (the counterexample) are rewritten to it; others pass through.
nlohmann::ordered_json expand_preset(const nlohmann::ordered_json& spec);

RunConfig parse_config_text(const std::string& text, const std::string& source = "<config>");
RunConfig parse_config(const std::string& path);

}  // namespace ljf
