#include "ljf/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include <boost/math/tools/roots.hpp>

#include "ljf/error.hpp"
#include "ljf/mvie.hpp"
#include "ljf/nelder_mead.hpp"

namespace ljf {

XiValue xi(const LevelSetProvider& levels, double s) {
  const HPolytope G = levels(s);
  const auto E = centered_mvie(symmetrize(G));
  return XiValue{s * std::exp(E.logdet), E.T};
}

XiValue xi_or_zero(const LevelSetProvider& levels, double s) {
  try {
    return xi(levels, s);
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::center_outside:
      case ErrorCode::degenerate:
      case ErrorCode::empty_set:
        return XiValue{0.0, Mat()};
      default:
        throw;
    }
  }
}

XiProfile xi_profile(const LevelSetProvider& levels, double s_top, int points, double s_floor_ratio) {
  if (points < 2) fail(ErrorCode::argument, "xi profile: need at least 2 points");
  XiProfile out;
  out.s_top = s_top;
  out.s_floor = s_top * s_floor_ratio;
  const double u_lo = std::log(out.s_floor), u_hi = std::log(s_top);
  for (int k = 0; k < points; ++k) {
    const double u = k + 1 == points ? u_hi : u_lo + (u_hi - u_lo) * k / (points - 1);
    const double s = k + 1 == points ? s_top : std::exp(u);
    auto v = xi_or_zero(levels, s);
    out.samples.push_back(XiSample{s, v.value, v.T});
  }
  return out;
}

namespace {

double log_or_minus_inf(double v) { return v > 0 ? std::log(v) : -kInf; }

bool is_unimodal(const std::vector<double>& v, double tol) {
  const std::size_t best = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
  auto slack = [&](double a, double b) { return tol * std::max({1.0, std::abs(a), std::abs(b)}); };
  for (std::size_t k = 1; k <= best; ++k) {
    if (v[k - 1] == -kInf) continue;
    if (v[k] < v[k - 1] - slack(v[k], v[k - 1])) return false;
  }
  for (std::size_t k = best + 1; k < v.size(); ++k) {
    if (v[k] == -kInf) continue;
    if (v[k - 1] == -kInf || v[k] > v[k - 1] + slack(v[k], v[k - 1])) return false;
  }
  return true;
}

}  // namespace

XiOptimum maximize_xi(const LevelSetProvider& levels, double s_top, const SolverOptions& options) {
  if (!(s_top > 0) || !std::isfinite(s_top)) fail(ErrorCode::argument, "maximize_xi: invalid upper end of the s-range");
  const double u_hi = std::log(s_top);
  const double u_lo = std::log(s_top * options.s_floor_ratio);
  int evaluations = 0;
  double best_u = u_hi, best_v = -kInf;
  Mat best_T;
  auto eval = [&](double u) {
    ++evaluations;
    const double s = u >= u_hi ? s_top : std::exp(u);
    const auto x = xi_or_zero(levels, s);
    const double v = log_or_minus_inf(x.value);
    if (v > best_v || (v == best_v && u > best_u)) {
      best_v = v;
      best_u = u;
      best_T = x.T;
    }
    return v;
  };
  auto scan = [&](int points, std::vector<double>& us, std::vector<double>& vs) {
    us.resize(static_cast<std::size_t>(points));
    vs.resize(static_cast<std::size_t>(points));
    for (int k = 0; k < points; ++k) {
      const double u = k + 1 == points ? u_hi : u_lo + (u_hi - u_lo) * k / (points - 1);
      us[static_cast<std::size_t>(k)] = u;
      vs[static_cast<std::size_t>(k)] = eval(u);
    }
  };

  std::vector<double> us, vs;
  scan(std::max(3, options.scan_points), us, vs);
  bool unimodal = is_unimodal(vs, options.unimodality_tol);
  if (!unimodal) scan(std::max(3, options.fallback_points), us, vs);
  if (best_v == -kInf) fail(ErrorCode::degenerate, "maximize_xi: xi vanishes on the whole s-range");

  const std::size_t k = static_cast<std::size_t>(std::max_element(vs.begin(), vs.end()) - vs.begin());
  const double a = us[k == 0 ? 0 : k - 1];
  const double b = us[std::min(k + 1, us.size() - 1)];
  const double xtol = options.u_tol * std::max(1.0, std::abs(us[k]));
  golden_section_max(eval, a, b, xtol, 300);

  XiOptimum out;
  out.s0 = best_u >= u_hi ? s_top : std::exp(best_u);
  out.xi0 = std::exp(best_v);
  out.T0 = best_T;
  out.unimodal = unimodal;
  out.pinned_floor = best_u <= u_lo + 2 * xtol;
  out.pinned_top = best_u >= u_hi - 2 * xtol;
  out.evaluations = evaluations;
  return out;
}

double xi_log_concavity_slack(const LevelSetProvider& levels, double s_top, int triples, std::uint64_t seed,
                              double s_floor_ratio) {
  std::mt19937_64 rng(seed);
  const double u_lo = std::log(s_top * s_floor_ratio), u_hi = std::log(s_top);
  std::uniform_real_distribution<double> U(u_lo, u_hi), L(0.0, 1.0);
  double worst = kInf;
  for (int i = 0; i < triples; ++i) {
    const double u1 = U(rng), u2 = U(rng), lam = L(rng);
    const double x1 = xi_or_zero(levels, std::exp(u1)).value;
    const double x2 = xi_or_zero(levels, std::exp(u2)).value;
    const double xm = xi_or_zero(levels, std::exp((1 - lam) * u1 + lam * u2)).value;
    const double rhs = std::pow(x1, 1 - lam) * std::pow(x2, lam);
    const double scale = std::max({x1, x2, xm});
    if (scale <= 0) continue;
    worst = std::min(worst, (xm - rhs) / scale);
  }
  return worst;
}

// ---------------------------------------------------------------- problems

LownerProblem::LownerProblem(const LogConcaveFunction& f, const Discretization& disc)
    : f_(f),
      p_(f.interior_point()),
      base_(polar(LogConcaveFunction::transformed(f, -f.interior_point(), Vec::Zero(f.dim())), Vec::Zero(f.dim()))),
      disc_(disc) {}

ProblemLevels LownerProblem::at_centre(const Vec& c) const {
  if (c.size() != f_.dim()) fail(ErrorCode::dimension, "lowner: centre dimension mismatch");
  if (!f_.in_interior_of_support(c)) fail(ErrorCode::center_outside, "lowner: centre is not interior to supp f");
  const auto g = tilt_polar(base_, p_ - c).function;
  const Vec zero = Vec::Zero(f_.dim());
  const double top = std::exp(-g.psi(zero));
  auto disc = disc_;
  return ProblemLevels{[g, disc, zero](double s) { return level_set(g, s, disc, zero); }, top};
}

JohnProblem::JohnProblem(const LogConcaveFunction& f, const Discretization& disc) : f_(f), disc_(disc) {}

ProblemLevels JohnProblem::at_centre(const Vec& c) const {
  if (c.size() != f_.dim()) fail(ErrorCode::dimension, "john: centre dimension mismatch");
  const double v = f_.psi(c);
  if (!std::isfinite(v)) fail(ErrorCode::center_outside, "john: centre is outside supp f");
  auto f = f_;
  auto disc = disc_;
  return ProblemLevels{[f, disc, c](double s) { return translate(level_set(f, s, disc, c), -c); }, std::exp(-v)};
}

namespace {

double lowner_value(const XiOptimum& o, int n) {
  return std::tgamma(n + 1.0) * unit_ball_volume(n) / o.xi0;
}

}  // namespace

CenterObjective lowner_at_center(const LogConcaveFunction& f, const Vec& b, const SolverOptions& options) {
  const LownerProblem problem(f, options.disc);
  const auto pl = problem.at_centre(-b);
  auto inner = maximize_xi(pl.levels, pl.s_top, options);
  return CenterObjective{b, lowner_value(inner, f.dim()), inner.s0, inner.T0, inner};
}

CenterObjective john_at_center(const LogConcaveFunction& f, const Vec& b, const SolverOptions& options) {
  const JohnProblem problem(f, options.disc);
  const auto pl = problem.at_centre(-b);
  auto inner = maximize_xi(pl.levels, pl.s_top, options);
  return CenterObjective{b, inner.xi0, inner.s0, inner.T0, inner};
}

// ---------------------------------------------------------------- drivers

namespace {

struct SearchOutcome {
  Vec centre;
  int iterations = 0;
  std::vector<Vec> starts_found;
  std::vector<double> values;
};

bool lex_less(double va, const Vec& a, double vb, const Vec& b) {
  if (va != vb) return va < vb;
  for (int i = 0; i < a.size(); ++i)
    if (a(i) != b(i)) return a(i) < b(i);
  return false;
}

// Minimises objective(c) over the box with 1 + n restarts around `anchor`.
SearchOutcome search_centre(const std::function<double(const Vec&)>& objective, const Box& box, const Vec& anchor,
                            const SolverOptions& options) {
  const int n = box.dim();
  const Vec width = box.width();
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> jitter(-1e-3, 1e-3);
  const int restarts = options.restarts > 0 ? options.restarts : 1 + n;

  auto bounded = [&](const Vec& c) {
    if (!box.contains(c)) return kInf;
    try {
      return objective(c);
    } catch (const Error&) {
      return kInf;
    }
  };

  SearchOutcome out;
  double best = kInf;
  for (int r = 0; r < restarts; ++r) {
    Vec start = anchor;
    if (r > 0) start((r - 1) % n) += 0.1 * width((r - 1) % n) * (((r - 1) / n) % 2 == 0 ? 1.0 : -1.0);
    for (int i = 0; i < n; ++i) start(i) += jitter(rng) * width(i);
    NelderMeadOptions nm;
    nm.initial_step = 0.1 * width.maxCoeff();
    nm.xtol = options.nm_xtol * std::max(1.0, width.maxCoeff());
    nm.ftol = 1e-13;
    nm.max_iterations = options.nm_max_iterations;
    const auto res = nelder_mead(bounded, start, nm);
    out.iterations += res.iterations;
    out.starts_found.push_back(res.x);
    out.values.push_back(res.value);
    if (out.centre.size() == 0 || lex_less(res.value, res.x, best, out.centre)) {
      best = res.value;
      out.centre = res.x;
    }
  }
  if (!std::isfinite(best)) fail(ErrorCode::convergence, "centre search: no feasible centre found");
  return out;
}

std::vector<Vec> domination_extra_points(const LogConcaveFunction& f, double sup) {
  std::vector<Vec> pts;
  for (double k : {0.5, 1.0, 2.0, 4.0}) {
    try {
      for (auto& v : level_set(f, sup * std::exp(-k)).vertices()) pts.push_back(v);
    } catch (const Error&) {
    }
  }
  return pts;
}

template <class Problem>
SolveReport solve(const LogConcaveFunction& f, const SolverOptions& options, ProblemKind kind) {
  const auto t_start = std::chrono::steady_clock::now();
  const int n = f.dim();
  const Problem problem(f, options.disc);
  SolveReport rep;
  rep.kind = kind;
  rep.outer_iterations = 0;
  rep.inner_evaluations = 0;
  rep.restarts = 0;
  rep.even_shortcut = false;

  auto inner_at = [&](const Vec& c) {
    const auto pl = problem.at_centre(c);
    auto o = maximize_xi(pl.levels, pl.s_top, options);
    rep.inner_evaluations += o.evaluations;
    return o;
  };

  const auto sup = f.sup_norm();
  Vec centre;
  if (options.even_shortcut && f.is_even()) {
    centre = Vec::Zero(n);
    rep.even_shortcut = true;
    rep.notes.push_back("even function: centre fixed at the origin");
  } else {
    const HPolytope G = level_set(f, 0.5 * sup.value, options.disc, sup.argmax);
    const Vec anchor = G.vertex_mean();
    Box box = G.bounding_box().inflated(2.0);
    auto objective = [&](const Vec& c) { return -log_or_minus_inf(inner_at(c).xi0); };
    for (int attempt = 0;; ++attempt) {
      auto found = search_centre(objective, box, anchor, options);
      rep.outer_iterations += found.iterations;
      rep.restarts += static_cast<int>(found.starts_found.size());
      rep.restart_centres = found.starts_found;
      rep.restart_values = found.values;
      centre = found.centre;
      rep.search_box = box;
      if (box.relative_face_distance(centre) > 1e-3) break;
      if (attempt == 1) fail(ErrorCode::region, "centre search: optimum on the boundary of the enlarged search box");
      rep.warnings.push_back("centre search hit the search box boundary; box doubled");
      box = box.inflated(2.0);
    }
  }

  const auto o = inner_at(centre);
  rep.s0 = o.s0;
  rep.t0 = -std::log(o.s0);
  rep.xi0 = o.xi0;
  rep.pinned_floor = o.pinned_floor;
  rep.pinned_top = o.pinned_top;
  rep.unimodal = o.unimodal;
  if (!o.unimodal) rep.warnings.push_back("xi not unimodal on the seed scan; full scan fallback used");
  if (o.pinned_floor) rep.warnings.push_back("xi maximiser pinned to the s floor");
  if (o.pinned_top) rep.notes.push_back("xi maximiser at the top of the s-range");
  rep.optimizer = EllipsoidalFunction(o.T0, -centre, rep.t0);

  if (kind == ProblemKind::lowner) {
    rep.objective = ellipsoidal_integral(rep.optimizer);
    rep.feasibility_margin = verify_domination(rep.optimizer, f, domination_extra_points(f, sup.value));
  } else {
    rep.objective = rep.s0 * rep.optimizer.T().determinant();
    rep.feasibility_margin = verify_john_domination(rep.s0, o.T0, centre, f);
  }
  if (rep.feasibility_margin > options.domination_tol)
    rep.warnings.push_back("feasibility margin exceeds tolerance");
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return rep;
}

}  // namespace

SolveReport lowner(const LogConcaveFunction& f, const SolverOptions& options) {
  return solve<LownerProblem>(f, options, ProblemKind::lowner);
}

SolveReport john(const LogConcaveFunction& f, const SolverOptions& options) {
  return solve<JohnProblem>(f, options, ProblemKind::john);
}

RadialLowner radial_lowner(const RadialProfile& phi, int n) {
  if (n < 1) fail(ErrorCode::dimension, "radial_lowner: dimension must be >= 1");
  auto g = [&](double a) { return a - phi.derivative(n / a); };
  double lo = 1e-12, hi = 1.0;
  if (!(g(lo) < 0)) fail(ErrorCode::bracket, "radial_lowner: no sign change at the left end");
  while (!(g(hi) > 0)) {
    hi *= 2.0;
    if (hi > 1e300) fail(ErrorCode::bracket, "radial_lowner: no sign change in bracket");
  }
  boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 2);
  std::uintmax_t iters = 300;
  const auto br = boost::math::tools::bisect(g, lo, hi, tol, iters);
  const double a = 0.5 * (br.first + br.second);
  const double residual = std::abs(g(a));
  if (!(residual <= 1e-10 * std::max(1.0, a)))
    fail(ErrorCode::convergence, "radial_lowner: fixed point residual above tolerance");
  return RadialLowner{a, n - phi.value(n / a), residual};
}

double verify_domination(const EllipsoidalFunction& E, const LogConcaveFunction& f, const std::vector<Vec>& extra_points) {
  const int n = f.dim();
  const auto sup = f.sup_norm();
  const Box box = level_set(f, sup.value * std::exp(-8.0)).bounding_box().inflated(1.5);
  const int per_axis = n == 1 ? 20001 : n == 2 ? 401 : 61;
  double margin = -kInf;
  auto probe = [&](const Vec& x) {
    const double p = f.psi(x);
    if (std::isfinite(p)) margin = std::max(margin, E.exponent(x) - p);
  };
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  Vec x(n);
  for (;;) {
    for (int i = 0; i < n; ++i) x(i) = box.lo(i) + box.width()(i) * idx[static_cast<std::size_t>(i)] / (per_axis - 1);
    probe(x);
    int a = 0;
    while (a < n && ++idx[static_cast<std::size_t>(a)] == per_axis) idx[static_cast<std::size_t>(a++)] = 0;
    if (a == n) break;
  }
  for (const auto& p : extra_points) probe(p);
  probe(-E.b());
  return margin;
}

double verify_john_domination(double s, const Mat& T, const Vec& centre, const LogConcaveFunction& f) {
  const int n = f.dim();
  double margin = -kInf;
  for (const auto& u : sphere_directions(n, 512, 3)) margin = std::max(margin, f.psi(centre + T * u) + std::log(s));
  return margin;
}

}  // namespace ljf
