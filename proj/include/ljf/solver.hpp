#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ljf/core.hpp"
#include "ljf/geometry.hpp"
#include "ljf/legendre.hpp"

namespace ljf {

// s -> G(s), a polytope that must contain the origin in its interior.
using LevelSetProvider = std::function<HPolytope(double)>;

struct SolverOptions {
  Discretization disc;
  double s_floor_ratio = 1e-9;
  int scan_points = 17;
  int fallback_points = 129;
  double u_tol = 1e-8;
  double unimodality_tol = 1e-7;
  double domination_tol = 1e-6;
  std::uint64_t seed = 0;
  bool even_shortcut = true;
  int restarts = 0;  // 0 means 1 + n
  double nm_xtol = 1e-7;
  int nm_max_iterations = 400;
};

struct XiValue {
  double value;
  Mat T;  // empty when value is 0
};

// s det T(s), T(s) the centred max-det ellipsoid of G(s) ∩ -G(s). Throws when 0 is not interior.
XiValue xi(const LevelSetProvider& levels, double s);
// As xi, but 0 when G(s) is empty, degenerate or does not contain 0 in its interior.
XiValue xi_or_zero(const LevelSetProvider& levels, double s);

struct XiSample {
  double s;
  double xi;
  Mat T;
};

struct XiProfile {
  std::vector<XiSample> samples;
  double s_floor;
  double s_top;
};

// Log-uniform samples on [s_top * s_floor_ratio, s_top].
XiProfile xi_profile(const LevelSetProvider& levels, double s_top, int points, double s_floor_ratio = 1e-9);

struct XiOptimum {
  double s0;
  double xi0;
  Mat T0;
  bool pinned_floor;
  bool pinned_top;
  bool unimodal;
  int evaluations;
};

XiOptimum maximize_xi(const LevelSetProvider& levels, double s_top, const SolverOptions& options = {});

// min over random triples of [xi(s1^(1-l) s2^l) - xi(s1)^(1-l) xi(s2)^l] / max xi.
double xi_log_concavity_slack(const LevelSetProvider& levels, double s_top, int triples, std::uint64_t seed,
                              double s_floor_ratio = 1e-9);

struct ProblemLevels {
  LevelSetProvider levels;
  double s_top;
};

// Löwner side: level sets of the polar of f(. + c) at 0, for ellipsoid centre c (b = -c).
class LownerProblem {
 public:
  explicit LownerProblem(const LogConcaveFunction& f, const Discretization& disc = {});
  ProblemLevels at_centre(const Vec& c) const;
  const LogConcaveFunction& function() const { return f_; }
  Provenance provenance() const { return base_.provenance; }

 private:
  LogConcaveFunction f_;
  Vec p_;
  PolarFunction base_;
  Discretization disc_;
};

// John side: level sets of f translated so that the ellipsoid centre c sits at 0.
class JohnProblem {
 public:
  explicit JohnProblem(const LogConcaveFunction& f, const Discretization& disc = {});
  ProblemLevels at_centre(const Vec& c) const;
  const LogConcaveFunction& function() const { return f_; }

 private:
  LogConcaveFunction f_;
  Discretization disc_;
};

struct CenterObjective {
  Vec b;
  double value;  // I_f(b) for Löwner, J_f(b) for John
  double s;
  Mat T;
  XiOptimum inner;
};

CenterObjective lowner_at_center(const LogConcaveFunction& f, const Vec& b, const SolverOptions& options = {});
CenterObjective john_at_center(const LogConcaveFunction& f, const Vec& b, const SolverOptions& options = {});

enum class ProblemKind { lowner, john };

struct SolveReport {
  ProblemKind kind;
  // Löwner: x -> exp(-||T(x + b)|| + t). John: exp(-t) 1_{T B - b}.
  EllipsoidalFunction optimizer;
  double s0;
  double t0;
  double xi0;
  double objective;
  double feasibility_margin;
  bool even_shortcut;
  bool pinned_floor;
  bool pinned_top;
  bool unimodal;
  int outer_iterations;
  int inner_evaluations;
  int restarts;
  std::vector<Vec> restart_centres;
  std::vector<double> restart_values;
  std::optional<Box> search_box;
  double wall_time;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;
};

SolveReport lowner(const LogConcaveFunction& f, const SolverOptions& options = {});
SolveReport john(const LogConcaveFunction& f, const SolverOptions& options = {});

struct RadialLowner {
  double a;
  double t0;
  double residual;
};

// Solves a = phi'(n / a) by bisection; t0 = n - phi(n / a).
RadialLowner radial_lowner(const RadialProfile& phi, int n);

// sup_x ||T(x + b)|| - t - psi(x) over a dense grid and the given extra points.
double verify_domination(const EllipsoidalFunction& E, const LogConcaveFunction& f,
                         const std::vector<Vec>& extra_points = {});
// max over the ellipsoid boundary of psi + log s for s 1_{T B + centre} <= f.
double verify_john_domination(double s, const Mat& T, const Vec& centre, const LogConcaveFunction& f);

}  // namespace ljf
