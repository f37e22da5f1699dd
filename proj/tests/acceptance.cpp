// One line per acceptance criterion; exits non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ljf/config.hpp"
#include "ljf/duality.hpp"
#include "ljf/legendre.hpp"
#include "ljf/mvie.hpp"
#include "ljf/oracle.hpp"
#include "ljf/run.hpp"
#include "ljf/solver.hpp"
#include "support/oracles.hpp"

using namespace ljf;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + ("failed: " + what);
    }
  }
  void note(const std::string& s) {
    if (pass) detail += (detail.empty() ? "" : "; ") + s;
  }
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// max over directions of |h_A(u) - h_B(u)| for ellipsoids c + M B with M symmetric positive definite.
double ellipsoid_hausdorff(const Vec& c1, const Mat& M1, const Vec& c2, const Mat& M2) {
  double worst = 0.0;
  for (int k = 0; k < 3600; ++k) {
    const double th = 2 * std::numbers::pi * k / 3600;
    const Vec u{{std::cos(th), std::sin(th)}};
    worst = std::max(worst, std::abs(c1.dot(u) + (M1 * u).norm() - c2.dot(u) - (M2 * u).norm()));
  }
  return worst;
}

HPolytope polygon_from_ccw(const std::vector<Vec>& vs) {
  const int m = static_cast<int>(vs.size());
  Mat A(m, 2);
  Vec c(m);
  for (int i = 0; i < m; ++i) {
    const Vec& p = vs[static_cast<std::size_t>(i)];
    const Vec& q = vs[static_cast<std::size_t>((i + 1) % m)];
    A.row(i) << q(1) - p(1), p(0) - q(0);
    c(i) = A.row(i).dot(p);
  }
  return HPolytope(A, c);
}

SymmetricPolytope random_symmetric_polygon(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ang(0.0, std::numbers::pi), off(0.5, 2.0);
  std::uniform_int_distribution<int> rows(2, 7);
  const int m = rows(rng);
  Mat A(m, 2);
  Vec b(m);
  for (int i = 0; i < m; ++i) {
    const double th = i < 2 ? i * std::numbers::pi / 2 + 0.3 * ang(rng) : ang(rng);
    A.row(i) << std::cos(th), std::sin(th);
    b(i) = off(rng);
  }
  return SymmetricPolytope(A, b);
}

Outcome ac1() {
  Outcome o;
  for (int n : {1, 2, 3}) {
    const auto t = std::chrono::steady_clock::now();
    const auto r = lowner(LogConcaveFunction::gaussian(n));
    const double secs = seconds_since(t);
    const double det = r.optimizer.T().determinant(), want = std::pow(n, n / 2.0);
    const std::string tag = "n=" + std::to_string(n);
    o.check(std::abs(det - want) <= 1e-3 * want, tag + " det");
    o.check(std::abs(r.t0 - n / 2.0) <= 1e-3 * n / 2.0, tag + " t0");
    o.check(r.optimizer.b().norm() <= 1e-4, tag + " b");
    o.check(secs < 10.0, tag + " runtime");
    o.note(tag + fmt(" det=%.6f", det) + fmt(" t0=%.6f", r.t0) + fmt(" %.2fs", secs));
  }
  return o;
}

Outcome ac2() {
  Outcome o;
  std::mt19937_64 rng(42);
  std::normal_distribution<double> g;
  Mat M = Mat::Identity(2, 2) + 0.4 * Mat::NullaryExpr(2, 2, [&] { return g(rng); });
  if (M.determinant() < 0) M.col(0) *= -1;
  std::vector<Vec> hex;
  for (int k = 0; k < 6; ++k) hex.push_back(M * Vec{{std::cos(k * std::numbers::pi / 3), std::sin(k * std::numbers::pi / 3)}});

  std::vector<Vec> disk;
  for (int k = 0; k < 720; ++k) disk.push_back(Vec{{std::cos(k * std::numbers::pi / 360), std::sin(k * std::numbers::pi / 360)}});

  struct Case {
    std::string name;
    LogConcaveFunction f;
    std::vector<Vec> points;
  };
  const std::vector<Case> cases{
      {"square", LogConcaveFunction::cube_indicator(2),
       {Vec{{1.0, 1.0}}, Vec{{-1.0, 1.0}}, Vec{{-1.0, -1.0}}, Vec{{1.0, -1.0}}}},
      {"disk", LogConcaveFunction::radial(RadialProfile::polynomial({0.0}, 1.0), 2), disk},
      {"hexagon", LogConcaveFunction::indicator(polygon_from_ccw(hex)), hex}};
  for (const auto& c : cases) {
    const auto r = lowner(c.f);
    const auto mvee = testing::khachiyan_mvee(c.points, 1e-12);
    // {x : ||T(x + b)|| <= t0} = -b + t0 T^{-1} B.
    const Mat Tinv = r.optimizer.T().inverse();
    const double d = ellipsoid_hausdorff(-r.optimizer.b(), r.t0 * 0.5 * (Tinv + Tinv.transpose()), mvee.c,
                                         spd_sqrt(mvee.A.inverse()));
    o.check(std::abs(r.t0 - 2.0) <= 1e-3, c.name + " t0");
    o.check(d <= 1e-2, c.name + " hausdorff");
    o.note(c.name + fmt(" t0=%.6f", r.t0) + fmt(" H=%.2e", d));
  }
  return o;
}

Outcome ac3() {
  Outcome o;
  const std::vector<std::pair<std::string, std::vector<double>>> profiles{
      {"r^2/2", {0, 0, 0.5}}, {"r^4", {0, 0, 0, 0, 1}}, {"r+r^2", {0, 1, 1}}};
  for (const auto& [name, coeffs] : profiles)
    for (int n : {1, 2}) {
      const json spec{{"type", "radial_grid"}, {"coefficients", coeffs}, {"dim", n}, {"extent", 1.5},
                      {"points", n == 1 ? 4001 : 2049}};
      const auto r = lowner(parse_function(nlohmann::ordered_json(spec)));
      const auto e = radial_lowner(RadialProfile::polynomial(coeffs), n);
      const double a = std::pow(r.optimizer.T().determinant(), 1.0 / n);
      const std::string tag = name + " n=" + std::to_string(n);
      o.check(std::abs(a - e.a) <= 1e-3, tag + " a");
      o.check(std::abs(r.t0 - e.t0) <= 1e-3, tag + " t0");
      o.note(tag + fmt(" da=%.1e", a - e.a) + fmt(" dt0=%.1e", r.t0 - e.t0));
    }
  return o;
}

Outcome ac4() {
  Outcome o;
  const std::vector<std::pair<std::string, LogConcaveFunction>> cases{{"gaussian n=1", LogConcaveFunction::gaussian(1)},
                                                                      {"gaussian n=2", LogConcaveFunction::gaussian(2)},
                                                                      {"square", LogConcaveFunction::cube_indicator(2)}};
  for (const auto& [name, f] : cases) {
    const auto r = duality_check(f, Vec::Zero(f.dim()));
    o.check(r.verdict() == "equal-within-tol", name + " verdict");
    o.check(r.delta_log_s <= 1e-3, name + " log s");
    o.check(r.delta_ttt <= 1e-2, name + " TT^T");
    o.note(name + fmt(" dlogs=%.1e", r.delta_log_s) + fmt(" dTT=%.1e", r.delta_ttt));
  }
  return o;
}

Outcome ac5() {
  Outcome o;
  const auto rep = counterexample_report();
  o.check(rep.hprime >= -0.359 && rep.hprime <= -0.349, "hprime range");
  o.check(rep.duality.verdict() == "distinct", "duality verdict");
  const auto r = lowner(LogConcaveFunction::counterexample());
  const double T0 = r.optimizer.T()(0, 0), b0 = r.optimizer.b()(0);
  o.check(std::abs(T0 - 4.0 / std::sqrt(5.0)) <= 1e-2, "T0");
  o.check(std::abs(b0 + 3.0 / (8.0 * std::sqrt(5.0))) <= 1e-2, "b0");
  o.check(std::abs(r.t0 - 0.5) <= 1e-2, "t0");
  o.note(fmt("hprime=%.5f", rep.hprime) + " verdict=" + rep.duality.verdict() + fmt(" T0=%.5f", T0) +
         fmt(" b0=%.5f", b0) + fmt(" t0=%.5f", r.t0));
  return o;
}

Outcome ac6() {
  Outcome o;
  int profiles = 0;
  for (const auto& entry : fs::directory_iterator(LJF_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    auto c = parse_config(entry.path().string());
    if (c.task != "xi-scan") continue;
    ++profiles;
    c.out_dir = (fs::path("acceptance_out") / "xi" / entry.path().stem()).string();
    std::ostringstream err;
    const int rc = run(c, err);
    const auto j = json::parse(slurp(fs::path(c.out_dir) / "result.json"));
    const double slack = j["result"]["log_concavity_slack"].get<double>();
    const std::string name = entry.path().stem().string();
    o.check(rc == kExitOk, name + " exit status");
    o.check(slack >= -1e-6, name + " slack");
    o.note(name + fmt(" slack=%.2e", slack));
  }
  o.check(profiles > 0, "no xi-scan profile shipped");
  return o;
}

Outcome ac7() {
  Outcome o;
  const Grid1D a{0.5, 2.5, 201}, b{-0.5, 0.5, 201}, t{-0.5, 1.5, 2001};
  const Grid1D s{0.0, 1.0, 2001}, ja{0.25, 2.0, 201}, jb{-0.5, 0.5, 201};
  const std::vector<std::pair<std::string, LogConcaveFunction>> cases{
      {"gaussian", LogConcaveFunction::gaussian(1)},
      {"interval", LogConcaveFunction::cube_indicator(1)},
      {"counterexample", LogConcaveFunction::counterexample()}};
  double worst_1d = 0.0;
  for (const auto& [name, f] : cases) {
    const double gl = std::abs(brute_lowner_1d(f, a, b, t).objective / lowner(f).objective - 1);
    const double gj = std::abs(brute_john_1d(f, s, ja, jb).objective / john(f).objective - 1);
    o.check(gl <= 0.02, name + " lowner");
    o.check(gj <= 0.02, name + " john");
    worst_1d = std::max({worst_1d, gl, gj});
  }
  std::mt19937_64 rng(2024);
  double worst_mvie = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto P = random_symmetric_polygon(rng);
    const double solver = std::exp(centered_mvie(P).logdet);
    worst_mvie = std::max(worst_mvie, std::abs(brute_centered_mvie_2d(P).objective / solver - 1));
  }
  o.check(worst_mvie <= 0.01, "mvie");
  o.note(fmt("worst 1D gap=%.2e", worst_1d) + fmt(" worst mvie gap=%.2e", worst_mvie));
  return o;
}

Outcome ac8() {
  Outcome o;
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  int grids = 0;
  for (int n : {1, 2, 3})
    for (int size : {5, 9, 17, 33}) {
      std::vector<std::vector<double>> axes(static_cast<std::size_t>(n), testing::uniform(-1.5, 1.5, size));
      const Vec centre = Vec::NullaryExpr(n, [&] { return 0.3 * u(rng); });
      const double w = 0.5 + std::abs(u(rng));
      const auto g = testing::sample_grid(axes, [&](const Vec& x) {
        if ((x - centre).norm() > 1.4) return kInf;
        return w * (x - centre).squaredNorm() + (x - centre).cwiseAbs().sum() + 0.2 * x(0);
      });
      const auto conj = legendre_nd(g);
      const auto brute = testing::brute_nd(g, conj.axes);
      for (std::size_t i = 0; i < brute.size(); ++i)
        worst = std::max(worst, std::abs(conj.values[i] - brute[i]) / (1 + std::abs(brute[i])));
      ++grids;
    }
  o.check(worst <= 1e-12, "brute-force equality");

  // Drift in cells: smallest k with polar(polar(f)) at x inside the range of psi over [x - kh, x + kh].
  const std::vector<std::pair<std::string, LogConcaveFunction>> forms{
      {"gaussian", LogConcaveFunction::gaussian(1)},
      {"exp_abs", LogConcaveFunction::radial(RadialProfile::polynomial({0, 1}), 1)},
      {"counterexample", LogConcaveFunction::counterexample()},
      {"interval", LogConcaveFunction::cube_indicator(1)}};
  int worst_cells = 0;
  for (const auto& [name, f] : forms) {
    const auto xs = testing::uniform(-3, 3, 241);
    const double h = xs[1] - xs[0];
    std::vector<double> psi;
    for (double x : xs) psi.push_back(f.psi(Vec::Constant(1, x)));
    const auto grid = LogConcaveFunction::grid({xs}, psi);
    const auto back = polar(polar(grid, Vec::Zero(1)).function, Vec::Zero(1)).function;
    // Outside the hull of the returned grid the window truncates the result; only drift is measured.
    const auto* bg = std::get_if<GridFunction>(&back.variant());
    if (!bg) throw std::runtime_error(name + ": double transform is not a grid");
    const double x_lo = std::max(-2.4, bg->axes[0].front()), x_hi = std::min(2.4, bg->axes[0].back());
    for (double x = x_lo; x <= x_hi; x += 0.0125) {
      const double v = back.psi(Vec::Constant(1, x));
      const double exact = f.psi(Vec::Constant(1, x));
      if (!std::isfinite(v) && !std::isfinite(exact)) continue;
      int k = 0;
      for (; k <= 10; ++k) {
        double lo = kInf, hi = -kInf;
        for (int j = -20; j <= 20; ++j) {
          const double p = f.psi(Vec::Constant(1, x + k * h * j / 20.0));
          lo = std::min(lo, p);
          hi = std::max(hi, p);
        }
        if (v >= lo - 1e-12 && v <= hi + 1e-12) break;
      }
      worst_cells = std::max(worst_cells, k);
    }
  }
  o.check(worst_cells <= 2, "involution drift");
  o.note(std::to_string(grids) + " grids" + fmt(" max rel err=%.1e", worst) + " drift=" + std::to_string(worst_cells) +
         " cells");
  return o;
}

int cli(const std::string& task, const fs::path& config, const fs::path& out) {
  const std::string cmd = std::string(LJF_CLI_PATH) + " " + task + " --config " + config.string() + " --out " +
                          out.string() + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome ac9() {
  Outcome o;
  int presets = 0;
  for (const auto& entry : fs::directory_iterator(LJF_CONFIG_DIR)) {
    if (entry.path().extension() != ".json") continue;
    const auto task = json::parse(slurp(entry.path())).at("task").get<std::string>();
    const std::string name = entry.path().stem().string();
    const fs::path base = fs::path("acceptance_out") / "determinism" / name;
    fs::remove_all(base);
    const int r1 = cli(task, entry.path(), base / "a"), r2 = cli(task, entry.path(), base / "b");
    o.check(r1 == r2 && r1 != kExitError, name + " exit status");
    for (const auto& file : fs::directory_iterator(base / "a")) {
      const auto other = base / "b" / file.path().filename();
      if (file.path().extension() == ".json") {
        auto ja = json::parse(slurp(file.path())), jb = json::parse(slurp(other));
        ja.erase("timestamp");
        jb.erase("timestamp");
        o.check(ja.dump() == jb.dump(), name + " " + file.path().filename().string());
      } else {
        o.check(fs::exists(other) && slurp(file.path()) == slurp(other), name + " " + file.path().filename().string());
      }
    }
    ++presets;
  }
  o.check(presets > 0, "no presets found");
  o.note(std::to_string(presets) + " presets identical across two runs");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"AC1 gaussian closed form", ac1},   {"AC2 indicator", ac2},         {"AC3 radial fixed point", ac3},
      {"AC4 even duality", ac4},           {"AC5 counterexample", ac5},    {"AC6 xi log-concavity", ac6},
      {"AC7 oracle equivalence", ac7},     {"AC8 transform correctness", ac8}, {"AC9 determinism", ac9}};
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    const auto t = std::chrono::steady_clock::now();
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    if (!o.pass) ++failures;
    std::printf("%s %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", name, seconds_since(t), o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
