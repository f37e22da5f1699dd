#include "ljf/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "ljf/error.hpp"
#include "ljf/legendre.hpp"

namespace ljf {

using json = nlohmann::ordered_json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) fail(ErrorCode::validation, where + ": expected an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) fail(ErrorCode::validation, where + ": unknown key '" + key + "'");
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) fail(ErrorCode::validation, where + ": missing key '" + key + "'");
  return obj.at(key);
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) fail(ErrorCode::validation, field + ": expected a number");
  return v.get<double>();
}

// null, "inf", "+inf", "-inf" or a number.
double extended(const json& v, const std::string& field, double null_value) {
  if (v.is_null()) return null_value;
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
    fail(ErrorCode::validation, field + ": expected a number, null or \"±inf\"");
  }
  return number(v, field);
}

int integer(const json& v, const std::string& field, int min_value) {
  if (!v.is_number_integer()) fail(ErrorCode::validation, field + ": expected an integer");
  const int k = v.get<int>();
  if (k < min_value) fail(ErrorCode::validation, field + ": must be >= " + std::to_string(min_value));
  return k;
}

double positive(const json& v, const std::string& field) {
  const double x = number(v, field);
  if (!(x > 0) || !std::isfinite(x)) fail(ErrorCode::validation, field + ": must be positive");
  return x;
}

std::vector<double> numbers(const json& v, const std::string& field) {
  if (!v.is_array()) fail(ErrorCode::validation, field + ": expected an array");
  std::vector<double> out;
  for (const auto& x : v) out.push_back(number(x, field));
  return out;
}

Vec vec(const json& v, const std::string& field) {
  const auto xs = numbers(v, field);
  return Eigen::Map<const Vec>(xs.data(), static_cast<int>(xs.size()));
}

Mat rows_matrix(const json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) fail(ErrorCode::validation, field + ": expected a non-empty array of rows");
  const auto first = numbers(v[0], field);
  Mat M(static_cast<int>(v.size()), static_cast<int>(first.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    const auto row = numbers(v[i], field);
    if (row.size() != first.size()) fail(ErrorCode::validation, field + ": ragged rows");
    for (std::size_t j = 0; j < row.size(); ++j) M(static_cast<int>(i), static_cast<int>(j)) = row[j];
  }
  return M;
}

HPolytope regular_polygon(int sides, double circumradius) {
  Mat A(sides, 2);
  Vec c(sides);
  const double apothem = circumradius * std::cos(std::numbers::pi / sides);
  for (int k = 0; k < sides; ++k) {
    const double th = 2 * std::numbers::pi * (k + 0.5) / sides;
    A(k, 0) = std::cos(th);
    A(k, 1) = std::sin(th);
    c(k) = apothem;
  }
  return HPolytope(A, c);
}

LogConcaveFunction preset(const json& spec) {
  check_keys(spec, {"preset", "dim", "half_width"}, "function");
  const auto name = spec.at("preset").get<std::string>();
  const int dim = spec.contains("dim") ? integer(spec.at("dim"), "function.dim", 1) : 1;
  const double half = spec.contains("half_width") ? positive(spec.at("half_width"), "function.half_width") : 1.0;
  if (name == "gaussian") return LogConcaveFunction::gaussian(dim);
  if (name == "counterexample") return LogConcaveFunction::counterexample();
  if (name == "cube") return LogConcaveFunction::cube_indicator(dim, half);
  if (name == "cube_polar") return conjugate_function(LogConcaveFunction::cube_indicator(dim, half));
  if (name == "ball") return LogConcaveFunction::radial(RadialProfile::polynomial({0.0}, half), dim);
  if (name == "exp_abs") return LogConcaveFunction::radial(RadialProfile::polynomial({0.0, 1.0}), dim);
  if (name == "hexagon") return LogConcaveFunction::indicator(regular_polygon(6, half));
  fail(ErrorCode::validation, "function.preset: unknown preset '" + name + "'");
}

std::vector<double> uniform_axis(double extent, int points) {
  std::vector<double> ax(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) ax[static_cast<std::size_t>(k)] = -extent + 2 * extent * k / (points - 1);
  // Exact mirror symmetry keeps even samples even.
  for (int k = 0; k < points / 2; ++k) ax[static_cast<std::size_t>(points - 1 - k)] = -ax[static_cast<std::size_t>(k)];
  if (points % 2 == 1) ax[static_cast<std::size_t>(points / 2)] = 0.0;
  return ax;
}

}  // namespace

json expand_preset(const json& spec) {
  if (spec.is_object() && spec.value("preset", "") == "counterexample") {
    check_keys(spec, {"preset"}, "function");
    return json{{"type", "piecewise_quadratic"},
                {"pieces", json::array({json{{"lo", "-inf"}, {"hi", 0.0}, {"a", 4.0}, {"b", 0.0}, {"c", 0.0}},
                                        json{{"lo", 0.0}, {"hi", "inf"}, {"a", 1.0}, {"b", 0.0}, {"c", 0.0}}})}};
  }
  return spec;
}

LogConcaveFunction parse_function(const json& spec) {
  if (!spec.is_object()) fail(ErrorCode::validation, "function: expected an object");
  if (spec.contains("preset")) return preset(spec);
  const auto type = require(spec, "type", "function").get<std::string>();
  if (type == "radial") {
    check_keys(spec, {"type", "coefficients", "radius", "dim", "conjugate"}, "function");
    auto profile = RadialProfile::polynomial(numbers(require(spec, "coefficients", "function"), "function.coefficients"),
                                             spec.contains("radius") ? extended(spec.at("radius"), "function.radius", kInf) : kInf);
    if (spec.value("conjugate", false)) profile = profile.conjugate();
    return LogConcaveFunction::radial(profile, integer(require(spec, "dim", "function"), "function.dim", 1));
  }
  if (type == "indicator" || type == "support") {
    check_keys(spec, {"type", "normals", "offsets", "offset"}, "function");
    HPolytope K(rows_matrix(require(spec, "normals", "function"), "function.normals"),
                vec(require(spec, "offsets", "function"), "function.offsets"));
    const double off = spec.contains("offset") ? number(spec.at("offset"), "function.offset") : 0.0;
    return type == "indicator" ? LogConcaveFunction::indicator(K, off) : LogConcaveFunction::support(K, off);
  }
  if (type == "piecewise_quadratic") {
    check_keys(spec, {"type", "pieces"}, "function");
    std::vector<QuadraticPiece> pieces;
    for (const auto& p : require(spec, "pieces", "function")) {
      check_keys(p, {"lo", "hi", "a", "b", "c"}, "function.pieces[]");
      pieces.push_back(QuadraticPiece{extended(require(p, "lo", "piece"), "piece.lo", -kInf),
                                      extended(require(p, "hi", "piece"), "piece.hi", kInf),
                                      p.contains("a") ? number(p.at("a"), "piece.a") : 0.0,
                                      p.contains("b") ? number(p.at("b"), "piece.b") : 0.0,
                                      p.contains("c") ? number(p.at("c"), "piece.c") : 0.0});
    }
    return LogConcaveFunction::piecewise_quadratic(std::move(pieces));
  }
  if (type == "grid") {
    check_keys(spec, {"type", "axes", "values"}, "function");
    std::vector<std::vector<double>> axes;
    for (const auto& ax : require(spec, "axes", "function")) axes.push_back(numbers(ax, "function.axes"));
    std::vector<double> values;
    for (const auto& v : require(spec, "values", "function")) values.push_back(extended(v, "function.values", kInf));
    return LogConcaveFunction::grid(std::move(axes), std::move(values));
  }
  if (type == "radial_grid") {
    check_keys(spec, {"type", "coefficients", "radius", "dim", "extent", "points"}, "function");
    const auto profile = RadialProfile::polynomial(
        numbers(require(spec, "coefficients", "function"), "function.coefficients"),
        spec.contains("radius") ? extended(spec.at("radius"), "function.radius", kInf) : kInf);
    const int dim = integer(require(spec, "dim", "function"), "function.dim", 1);
    if (dim > 3) fail(ErrorCode::validation, "function.dim: grids support at most 3 dimensions");
    const double extent = positive(require(spec, "extent", "function"), "function.extent");
    const int points = integer(require(spec, "points", "function"), "function.points", 3);
    const auto ax = uniform_axis(extent, points);
    std::vector<std::vector<double>> axes(static_cast<std::size_t>(dim), ax);
    std::size_t total = 1;
    for (int a = 0; a < dim; ++a) total *= ax.size();
    std::vector<double> values(total);
    std::vector<std::size_t> idx(static_cast<std::size_t>(dim), 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rem = flat;
      double r2 = 0.0;
      for (int a = dim - 1; a >= 0; --a) {
        const double x = ax[rem % ax.size()];
        rem /= ax.size();
        r2 += x * x;
      }
      values[flat] = profile.value(std::sqrt(r2));
    }
    return LogConcaveFunction::grid(std::move(axes), std::move(values));
  }
  fail(ErrorCode::validation, "function.type: unknown type '" + type + "'");
}

RunConfig parse_config_text(const std::string& text, const std::string& source) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // Translate the byte offset into line and column.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail(ErrorCode::parse, source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
  check_keys(root,
             {"task", "function", "centre", "polytope", "tolerances", "s_floor", "seed_scan_points", "fallback_points",
              "scan_points", "plot_points", "discretization", "seed", "output", "oracle", "restarts", "even_shortcut",
              "h_step"},
             "config");

  RunConfig cfg;
  try {
    if (root.contains("task")) {
      cfg.task = root.at("task").get<std::string>();
      if (std::find(std::begin(kTasks), std::end(kTasks), cfg.task) == std::end(kTasks))
        fail(ErrorCode::validation, "task: unknown task '" + cfg.task + "'");
    }
    if (root.contains("function")) {
      cfg.function_spec = expand_preset(root.at("function"));
      cfg.function = parse_function(cfg.function_spec);
    }
    if (root.contains("centre")) cfg.centre = vec(root.at("centre"), "centre");
    if (root.contains("polytope")) {
      const auto& p = root.at("polytope");
      check_keys(p, {"normals", "bounds"}, "polytope");
      cfg.polytope = SymmetricPolytope(rows_matrix(require(p, "normals", "polytope"), "polytope.normals"),
                                       vec(require(p, "bounds", "polytope"), "polytope.bounds"));
    }
    if (root.contains("tolerances")) {
      const auto& t = root.at("tolerances");
      check_keys(t, {"domination", "u", "unimodality", "nm_x", "duality_log_s", "duality_ttt", "duality_centre"},
                 "tolerances");
      if (t.contains("domination")) cfg.solver.domination_tol = positive(t.at("domination"), "tolerances.domination");
      if (t.contains("u")) cfg.solver.u_tol = positive(t.at("u"), "tolerances.u");
      if (t.contains("unimodality")) cfg.solver.unimodality_tol = positive(t.at("unimodality"), "tolerances.unimodality");
      if (t.contains("nm_x")) cfg.solver.nm_xtol = positive(t.at("nm_x"), "tolerances.nm_x");
      if (t.contains("duality_log_s")) cfg.duality.log_s = positive(t.at("duality_log_s"), "tolerances.duality_log_s");
      if (t.contains("duality_ttt")) cfg.duality.ttt_relative = positive(t.at("duality_ttt"), "tolerances.duality_ttt");
      if (t.contains("duality_centre"))
        cfg.duality.centre = positive(t.at("duality_centre"), "tolerances.duality_centre");
    }
    if (root.contains("s_floor")) {
      const double r = number(root.at("s_floor"), "s_floor");
      if (!(r > 0 && r < 1)) fail(ErrorCode::validation, "s_floor: must lie in (0, 1)");
      cfg.solver.s_floor_ratio = r;
    }
    if (root.contains("seed_scan_points")) cfg.solver.scan_points = integer(root.at("seed_scan_points"), "seed_scan_points", 3);
    if (root.contains("fallback_points")) cfg.solver.fallback_points = integer(root.at("fallback_points"), "fallback_points", 3);
    if (root.contains("scan_points")) cfg.scan_points = integer(root.at("scan_points"), "scan_points", 2);
    if (root.contains("plot_points")) cfg.plot_points = integer(root.at("plot_points"), "plot_points", 2);
    if (root.contains("restarts")) cfg.solver.restarts = integer(root.at("restarts"), "restarts", 1);
    if (root.contains("even_shortcut")) cfg.solver.even_shortcut = root.at("even_shortcut").get<bool>();
    if (root.contains("h_step")) cfg.h_step = positive(root.at("h_step"), "h_step");
    if (root.contains("discretization")) {
      const auto& d = root.at("discretization");
      check_keys(d, {"polygon_sides", "ray_count", "icosphere_level"}, "discretization");
      if (d.contains("polygon_sides")) cfg.solver.disc.polygon_sides = integer(d.at("polygon_sides"), "discretization.polygon_sides", 3);
      if (d.contains("ray_count")) cfg.solver.disc.ray_count = integer(d.at("ray_count"), "discretization.ray_count", 3);
      if (d.contains("icosphere_level"))
        cfg.solver.disc.icosphere_level = integer(d.at("icosphere_level"), "discretization.icosphere_level", 0);
    }
    if (root.contains("seed")) {
      if (!root.at("seed").is_number_unsigned()) fail(ErrorCode::validation, "seed: expected a non-negative integer");
      cfg.solver.seed = root.at("seed").get<std::uint64_t>();
    }
    if (root.contains("output")) cfg.out_dir = root.at("output").get<std::string>();
    if (root.contains("oracle")) {
      const auto& o = root.at("oracle");
      check_keys(o, {"a_points", "b_points", "t_points", "s_points", "samples", "angle_steps", "axis_steps"}, "oracle");
      auto get = [&](const char* k, int& dst) {
        if (o.contains(k)) dst = integer(o.at(k), std::string("oracle.") + k, 2);
      };
      get("a_points", cfg.oracle.a_points);
      get("b_points", cfg.oracle.b_points);
      get("t_points", cfg.oracle.t_points);
      get("s_points", cfg.oracle.s_points);
      get("samples", cfg.oracle.samples);
      get("angle_steps", cfg.oracle.angle_steps);
      get("axis_steps", cfg.oracle.axis_steps);
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::validation, std::string("config: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::validation) throw;
    fail(ErrorCode::validation, std::string("function: ") + e.what());
  }
  if (cfg.centre && cfg.function && cfg.centre->size() != cfg.function->dim())
    fail(ErrorCode::validation, "centre: dimension does not match the function");
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::io, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

}  // namespace ljf
