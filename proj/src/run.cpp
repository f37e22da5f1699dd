#include "ljf/run.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ljf/duality.hpp"
#include "ljf/error.hpp"
#include "ljf/geometry.hpp"
#include "ljf/legendre.hpp"
#include "ljf/mvie.hpp"
#include "ljf/oracle.hpp"

#ifndef LJF_VERSION
#define LJF_VERSION "0.0.0"
#endif

namespace ljf {

using json = nlohmann::ordered_json;

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.parent_path() / ("." + target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorCode::io, "cannot write '" + tmp.string() + "'");
    out << contents;
    out.flush();
    if (!out) fail(ErrorCode::io, "write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) fail(ErrorCode::io, "cannot rename onto '" + path + "': " + ec.message());
}

namespace {

json to_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json to_json(const Mat& M) {
  json a = json::array();
  for (int i = 0; i < M.rows(); ++i) a.push_back(to_json(Vec(M.row(i).transpose())));
  return a;
}

json to_json(const std::vector<std::string>& xs) {
  json a = json::array();
  for (const auto& x : xs) a.push_back(x);
  return a;
}

double det_or_nan(const Mat& T) { return T.size() ? T.determinant() : std::nan(""); }

json solve_report_json(const SolveReport& r) {
  json j;
  j["kind"] = r.kind == ProblemKind::lowner ? "lowner" : "john";
  j["T"] = to_json(r.optimizer.T());
  j["b"] = to_json(r.optimizer.b());
  j["centre"] = to_json(Vec(-r.optimizer.b()));
  j["t0"] = r.t0;
  j["s0"] = r.s0;
  j["det_T"] = r.optimizer.T().determinant();
  j["xi0"] = r.xi0;
  j["objective"] = r.objective;
  j["feasibility_margin"] = r.feasibility_margin;
  j["even_shortcut"] = r.even_shortcut;
  j["pinned_floor"] = r.pinned_floor;
  j["pinned_top"] = r.pinned_top;
  j["unimodal"] = r.unimodal;
  j["outer_iterations"] = r.outer_iterations;
  j["inner_evaluations"] = r.inner_evaluations;
  j["restarts"] = r.restarts;
  json rs = json::array();
  for (std::size_t k = 0; k < r.restart_centres.size(); ++k)
    rs.push_back({{"centre", to_json(r.restart_centres[k])}, {"value", r.restart_values[k]}});
  j["restart_results"] = rs;
  if (r.search_box) j["search_box"] = {{"lo", to_json(r.search_box->lo)}, {"hi", to_json(r.search_box->hi)}};
  else j["search_box"] = nullptr;
  j["warnings"] = to_json(r.warnings);
  j["notes"] = to_json(r.notes);
  return j;
}

json indicator_json(const ScaledIndicator& J) {
  return {{"s", J.s}, {"log_s", std::log(J.s)}, {"T", to_json(J.T)}, {"centre", to_json(J.centre)}};
}

json duality_json(const DualityReport& d) {
  json j;
  j["left"] = indicator_json(d.left);
  j["left_ellipsoidal"] = d.left_ellipsoidal;
  j["right"] = indicator_json(d.right);
  j["delta_log_s"] = d.delta_log_s;
  j["delta_ttt"] = d.delta_ttt;
  j["delta_centre"] = d.delta_centre;
  j["verdict"] = d.verdict();
  j["lowner"] = solve_report_json(d.lowner_report);
  j["john"] = solve_report_json(d.john_report);
  return j;
}

const LogConcaveFunction& need_function(const RunConfig& c) {
  if (!c.function) fail(ErrorCode::validation, "function: required for task '" + c.task + "'");
  return *c.function;
}

Vec centre_or_default(const RunConfig& c, const LogConcaveFunction& f) {
  if (c.centre) return *c.centre;
  return f.is_even() ? Vec(Vec::Zero(f.dim())) : f.interior_point();
}

// Plot window: bounding box of a deep level set, inflated; a unit box around `fallback` otherwise.
Box plot_box(const LogConcaveFunction& f, const Discretization& disc, const Vec& fallback) {
  try {
    const auto sup = f.sup_norm();
    return level_set(f, sup.value * std::exp(-8.0), disc).bounding_box().inflated(1.5);
  } catch (const Error&) {
    return Box{(fallback.array() - 3.0).matrix(), (fallback.array() + 3.0).matrix()};
  }
}

struct CsvTable {
  std::string text;
  void header(const std::string& h) { text += h + "\n"; }
  void row(const std::vector<double>& xs) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i) text += ',';
      text += format_double(xs[i]);
    }
    text += '\n';
  }
};

// Samples columns (x..., values...) on a grid over the first min(n, 2) coordinates, others fixed at `anchor`.
template <class Fn>
std::string sample_csv(const Box& box, const Vec& anchor, int points, const std::vector<std::string>& names, Fn values) {
  const int n = static_cast<int>(anchor.size());
  CsvTable t;
  std::string h;
  for (int i = 0; i < n; ++i) h += (i ? ",x" : "x") + std::to_string(i + 1);
  if (n == 1) h = "x";
  for (const auto& nm : names) h += "," + nm;
  t.header(h);
  auto coord = [&](int axis, int k) { return box.lo(axis) + (box.hi(axis) - box.lo(axis)) * k / (points - 1); };
  const int inner = n >= 2 ? points : 1;
  for (int i = 0; i < points; ++i) {
    for (int j = 0; j < inner; ++j) {
      Vec x = anchor;
      x(0) = coord(0, i);
      if (n >= 2) x(1) = coord(1, j);
      std::vector<double> row(x.data(), x.data() + n);
      for (double v : values(x)) row.push_back(v);
      t.row(row);
    }
  }
  return t.text;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Output {
  json result;
  std::vector<std::pair<std::string, std::string>> files;  // name, contents
  std::vector<std::string> warnings;
  double solver_time = 0.0;
};

void task_solve(const RunConfig& c, Output& o, ProblemKind kind) {
  const auto& f = need_function(c);
  const auto rep = kind == ProblemKind::lowner ? lowner(f, c.solver) : john(f, c.solver);
  o.solver_time = rep.wall_time;
  o.result = solve_report_json(rep);
  if (kind == ProblemKind::lowner) o.result["objective_roundtrip"] = ellipsoidal_integral(rep.optimizer);
  for (const auto& w : rep.warnings) o.warnings.push_back(w);
  if (c.json_only) return;
  const Vec centre = -rep.optimizer.b();
  const Box box = plot_box(f, c.solver.disc, centre);
  const auto& E = rep.optimizer;
  const Mat Tinv = E.T().inverse();
  const std::string csv = sample_csv(box, centre, c.plot_points, {"f", kind == ProblemKind::lowner ? "lowner" : "john"},
                                     [&](const Vec& x) -> std::vector<double> {
                                       const double fx = f(x);
                                       if (kind == ProblemKind::lowner) return {fx, E(x)};
                                       const bool inside = (Tinv * (x - centre)).norm() <= 1.0;
                                       return {fx, inside ? rep.s0 : 0.0};
                                     });
  o.files.emplace_back("optimizer.csv", csv);
}

void task_polar(const RunConfig& c, Output& o) {
  const auto& f = need_function(c);
  const Vec z = centre_or_default(c, f);
  const auto pf = polar(f, z);
  const auto sup = pf.function.sup_norm();
  o.result["centre"] = to_json(z);
  o.result["kind"] = pf.function.kind();
  o.result["provenance"] = provenance_name(pf.provenance);
  o.result["sup_norm"] = sup.value;
  o.result["argmax"] = to_json(sup.argmax);
  o.result["even"] = pf.function.is_even();
  if (c.json_only) return;
  const Box box = plot_box(pf.function, c.solver.disc, z);
  o.files.emplace_back("polar.csv", sample_csv(box, z, c.plot_points, {"f", "polar"}, [&](const Vec& y) -> std::vector<double> {
                         return {f(y), pf.function(y)};
                       }));
}

void task_xi_scan(const RunConfig& c, Output& o) {
  const auto& f = need_function(c);
  const Vec centre = centre_or_default(c, f);
  const auto levels = JohnProblem(f, c.solver.disc).at_centre(centre);
  const auto profile = xi_profile(levels.levels, levels.s_top, c.scan_points, c.solver.s_floor_ratio);
  const auto best = maximize_xi(levels.levels, levels.s_top, c.solver);
  const double slack = xi_log_concavity_slack(levels.levels, levels.s_top, 200, c.solver.seed, c.solver.s_floor_ratio);
  o.result["centre"] = to_json(centre);
  o.result["s_floor"] = profile.s_floor;
  o.result["s_top"] = profile.s_top;
  o.result["points"] = c.scan_points;
  o.result["maximiser"] = {{"s0", best.s0},         {"xi0", best.xi0},
                           {"T0", to_json(best.T0)}, {"pinned_floor", best.pinned_floor},
                           {"pinned_top", best.pinned_top}, {"unimodal", best.unimodal},
                           {"evaluations", best.evaluations}};
  o.result["log_concavity_slack"] = slack;
  if (slack < -1e-6) o.warnings.push_back("xi profile violates log-concavity beyond 1e-6");
  if (c.json_only) return;
  CsvTable t;
  t.header("s,log_s,xi,log_xi,det_T");
  for (const auto& smp : profile.samples)
    t.row({smp.s, std::log(smp.s), smp.xi, std::log(smp.xi), smp.xi > 0 ? det_or_nan(smp.T) : 0.0});
  o.files.emplace_back("xi_scan.csv", t.text);
}

void task_duality(const RunConfig& c, Output& o) {
  const auto& f = need_function(c);
  const Vec centre = centre_or_default(c, f);
  const auto d = duality_check(f, centre, c.solver, c.duality);
  o.result = duality_json(d);
  o.result["centre"] = to_json(centre);
  for (const auto& w : d.lowner_report.warnings) o.warnings.push_back("lowner: " + w);
  for (const auto& w : d.john_report.warnings) o.warnings.push_back("john: " + w);
}

void task_counterexample(const RunConfig& c, Output& o) {
  const auto r = counterexample_report(c.h_step, c.solver);
  o.result["s"] = std::exp(-0.5);
  o.result["h"] = counterexample_h(std::exp(-0.5));
  o.result["hprime"] = r.hprime;
  o.result["error_bound"] = r.error_bound;
  o.result["step"] = c.h_step;
  o.result["verdict"] = r.duality_fails ? "duality fails" : "duality holds";
  o.result["duality_check"] = duality_json(r.duality);
}

json mvie_json(const InscribedEllipsoid& e, const MvieCertificate& cert) {
  json a = json::array();
  for (int k : e.active_rows) a.push_back(k);
  return {{"T", to_json(e.T)},
          {"logdet", e.logdet},
          {"det_T", std::exp(e.logdet)},
          {"active_rows", a},
          {"kkt_residual", e.kkt_residual},
          {"iterations", e.iterations},
          {"certificate", {{"feasible", cert.feasible}, {"margin", cert.margin}, {"locally_optimal", cert.locally_optimal}}}};
}

void task_mvie(const RunConfig& c, Output& o) {
  if (!c.polytope) fail(ErrorCode::validation, "polytope: required for task 'mvie'");
  const auto e = centered_mvie(*c.polytope);
  const auto cert = mvie_certificate(*c.polytope, e.T, 2000, c.solver.seed + 12345);
  o.result = mvie_json(e, cert);
  if (!cert.feasible) o.warnings.push_back("inscribed ellipsoid fails the feasibility check");
}

double relative_gap(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

void task_oracle(const RunConfig& c, Output& o) {
  const auto& oc = c.oracle;
  if (c.polytope) {
    if (c.polytope->dim() != 2) fail(ErrorCode::dimension, "oracle: polytope oracle needs dimension 2");
    const auto e = centered_mvie(*c.polytope);
    const auto b = brute_centered_mvie_2d(*c.polytope, oc.angle_steps, oc.axis_steps);
    const double gap = relative_gap(std::exp(e.logdet), b.objective);
    o.result["mvie"] = {{"solver_det", std::exp(e.logdet)},
                        {"oracle_det", b.objective},
                        {"oracle_params", to_json(b.params)},
                        {"relative_gap", gap}};
    if (gap > 0.01) o.warnings.push_back("mvie oracle disagrees by more than 1%");
    return;
  }
  const auto& f = need_function(c);
  if (f.dim() != 1) fail(ErrorCode::dimension, "oracle: function oracles need dimension 1");
  const auto L = lowner(f, c.solver);
  const auto J = john(f, c.solver);
  const double a = L.optimizer.T()(0, 0), b = L.optimizer.b()(0);
  const double w = 1.0 / a;
  const auto bl = brute_lowner_1d(f, Grid1D{0.5 * a, 1.5 * a, oc.a_points}, Grid1D{b - w, b + w, oc.b_points},
                                  Grid1D{L.t0 - 1.0, L.t0 + 1.0, oc.t_points}, oc.samples);
  const double ja = J.optimizer.T()(0, 0), jc = -J.optimizer.b()(0);
  const auto bj = brute_john_1d(f, Grid1D{0.0, f.sup_norm().value, oc.s_points}, Grid1D{0.5 * ja, 1.5 * ja, oc.a_points},
                                Grid1D{jc - ja, jc + ja, oc.b_points});
  const double gl = relative_gap(L.objective, bl.objective), gj = relative_gap(J.objective, bj.objective);
  o.result["lowner"] = {{"solver_objective", L.objective},
                        {"oracle_objective", bl.objective},
                        {"oracle_params", to_json(bl.params)},
                        {"relative_gap", gl}};
  o.result["john"] = {{"solver_objective", J.objective},
                      {"oracle_objective", bj.objective},
                      {"oracle_params", to_json(bj.params)},
                      {"relative_gap", gj}};
  if (gl > 0.02) o.warnings.push_back("lowner oracle disagrees by more than 2%");
  if (gj > 0.02) o.warnings.push_back("john oracle disagrees by more than 2%");
}

json tolerances_json(const RunConfig& c) {
  return {{"domination", c.solver.domination_tol},
          {"u", c.solver.u_tol},
          {"unimodality", c.solver.unimodality_tol},
          {"nm_x", c.solver.nm_xtol},
          {"s_floor", c.solver.s_floor_ratio},
          {"duality_log_s", c.duality.log_s},
          {"duality_ttt", c.duality.ttt_relative},
          {"duality_centre", c.duality.centre}};
}

}  // namespace

int run(const RunConfig& config, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const std::string utc = utc_now();
  Output o;
  try {
    const auto& t = config.task;
    if (t == "lowner") task_solve(config, o, ProblemKind::lowner);
    else if (t == "john") task_solve(config, o, ProblemKind::john);
    else if (t == "polar") task_polar(config, o);
    else if (t == "xi-scan") task_xi_scan(config, o);
    else if (t == "duality-check") task_duality(config, o);
    else if (t == "counterexample") task_counterexample(config, o);
    else if (t == "mvie") task_mvie(config, o);
    else if (t == "oracle") task_oracle(config, o);
    else fail(ErrorCode::validation, "task: unknown task '" + t + "'");

    const int code = o.warnings.empty() ? kExitOk : kExitWarning;
    json doc;
    doc["version"] = LJF_VERSION;
    doc["task"] = config.task;
    doc["status"] = code == kExitOk ? "ok" : "warning";
    doc["exit_code"] = code;
    doc["function"] = config.function_spec.is_null() ? json(nullptr) : config.function_spec;
    if (config.function) {
      doc["function_kind"] = config.function->kind();
      doc["dimension"] = config.function->dim();
    }
    doc["seed"] = config.solver.seed;
    doc["tolerances"] = tolerances_json(config);
    doc["discretization"] = {{"polygon_sides", config.solver.disc.polygon_sides},
                             {"ray_count", config.solver.disc.ray_count},
                             {"icosphere_level", config.solver.disc.icosphere_level}};
    doc["warnings"] = to_json(o.warnings);
    doc["result"] = o.result;
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    doc["timestamp"] = {{"utc", utc}, {"elapsed_s", elapsed}, {"solver_wall_time_s", o.solver_time}};

    std::filesystem::create_directories(config.out_dir);
    const std::filesystem::path dir(config.out_dir);
    write_file_atomic((dir / "result.json").string(), doc.dump(2) + "\n");
    for (const auto& [name, text] : o.files) write_file_atomic((dir / name).string(), text);
    for (const auto& w : o.warnings) err << "warning: " << w << "\n";
    return code;
  } catch (const Error& e) {
    err << "error[E" << static_cast<int>(e.code()) << "] " << error_code_name(e.code()) << ": " << e.what() << "\n";
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error[E" << static_cast<int>(ErrorCode::io) << "] " << error_code_name(ErrorCode::io) << ": " << e.what()
        << "\n";
  } catch (const std::exception& e) {
    err << "error[E" << static_cast<int>(ErrorCode::invariant) << "] " << error_code_name(ErrorCode::invariant) << ": "
        << e.what() << "\n";
  }
  return kExitError;
}

}  // namespace ljf
