#pragma once

#include <string>

#include "ljf/core.hpp"
#include "ljf/solver.hpp"

namespace ljf {

// s 1_{T B + centre}.
struct ScaledIndicator {
  double s;
  Mat T;
  Vec centre;
};

// Polar of E = exp(-||T(x + b)|| + t) at z: y -> exp(-t + <b + z, y - z>) 1_{T B + z}(y).
struct EllipsoidalPolar {
  bool ellipsoidal;     // b + z = 0
  ScaledIndicator indicator;  // the factor exp(-t) 1_{T B + z}
  Vec slope;            // b + z
  double operator()(const Vec& y) const;
};

EllipsoidalPolar polar_of_ellipsoidal(const EllipsoidalFunction& E, const Vec& z);
// Polar of s 1_{T B + c} at its centre c: y -> exp(-||T(y - c)|| - log s).
EllipsoidalFunction polar_of_scaled_indicator(const ScaledIndicator& J);

struct DualityTolerances {
  double log_s = 1e-3;
  double ttt_relative = 1e-2;
  double centre = 1e-2;
};

struct DualityReport {
  ScaledIndicator left;   // (L(f))^centre
  bool left_ellipsoidal;
  ScaledIndicator right;  // J(f^centre)
  double delta_log_s;
  double delta_ttt;       // ||T_l T_l^T - T_r T_r^T||_F / ||T_l T_l^T||_F
  double delta_centre;
  bool equal;
  SolveReport lowner_report;
  SolveReport john_report;
  DualityTolerances tolerances;
  std::string verdict() const { return equal ? "equal-within-tol" : "distinct"; }
};

DualityReport duality_check(const LogConcaveFunction& f, const Vec& centre, const SolverOptions& options = {},
                            const DualityTolerances& tol = {});

// h(s) of the one-dimensional counterexample.
double counterexample_h(double s);

struct CounterexampleReport {
  double hprime;
  double error_bound;
  bool duality_fails;
  DualityReport duality;
};

CounterexampleReport counterexample_report(double step = 1e-6, const SolverOptions& options = {});

// Central difference of counterexample_h at s with the given step.
double counterexample_hprime(double s, double step);

}  // namespace ljf
