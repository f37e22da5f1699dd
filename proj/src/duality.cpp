#include "ljf/duality.hpp"

#include <cmath>
#include <limits>

#include "ljf/error.hpp"
#include "ljf/legendre.hpp"

namespace ljf {

double EllipsoidalPolar::operator()(const Vec& y) const {
  const Vec u = y - indicator.centre;
  // y - z in T B iff ||T^{-1}(y - z)|| <= 1 (T symmetric positive definite).
  if (indicator.T.llt().solve(u).norm() > 1.0 + 1e-12) return 0.0;
  return indicator.s * std::exp(slope.dot(u));
}

EllipsoidalPolar polar_of_ellipsoidal(const EllipsoidalFunction& E, const Vec& z) {
  if (z.size() != E.dim()) fail(ErrorCode::dimension, "polar_of_ellipsoidal: centre dimension mismatch");
  EllipsoidalPolar out;
  out.slope = E.b() + z;
  const double scale = std::max(1.0, std::max(E.b().norm(), z.norm()));
  out.ellipsoidal = out.slope.norm() <= 1e-12 * scale;
  if (out.ellipsoidal) out.slope.setZero();
  out.indicator = ScaledIndicator{std::exp(-E.t()), E.T(), z};
  return out;
}

EllipsoidalFunction polar_of_scaled_indicator(const ScaledIndicator& J) {
  // sup_{x in T B + c} <x - c, y - c> - log s = ||T (y - c)|| - log s.
  return EllipsoidalFunction(J.T, -J.centre, -std::log(J.s));
}

DualityReport duality_check(const LogConcaveFunction& f, const Vec& centre, const SolverOptions& options,
                            const DualityTolerances& tol) {
  if (!f.in_interior_of_support(centre)) fail(ErrorCode::center_outside, "duality_check: centre is not interior to supp f");
  DualityReport rep;
  rep.tolerances = tol;
  rep.lowner_report = lowner(f, options);
  const auto lp = polar_of_ellipsoidal(rep.lowner_report.optimizer, centre);
  rep.left = lp.indicator;
  rep.left_ellipsoidal = lp.ellipsoidal;

  const auto fp = polar(f, centre);
  rep.john_report = john(fp.function, options);
  const auto& J = rep.john_report;
  rep.right = ScaledIndicator{J.s0, J.optimizer.T(), -J.optimizer.b()};

  const Mat L2 = rep.left.T * rep.left.T.transpose();
  const Mat R2 = rep.right.T * rep.right.T.transpose();
  rep.delta_log_s = std::abs(std::log(rep.left.s) - std::log(rep.right.s));
  rep.delta_ttt = (L2 - R2).norm() / L2.norm();
  rep.delta_centre = (rep.left.centre - rep.right.centre).norm();
  rep.equal = rep.delta_log_s <= tol.log_s && rep.delta_ttt <= tol.ttt_relative && rep.delta_centre <= tol.centre;
  return rep;
}

double counterexample_h(double s) {
  if (!(s > 0)) fail(ErrorCode::domain, "counterexample_h: s must be positive");
  const double l = std::log(s);
  const double r1 = 9.0 - 80.0 * l, r2 = 9.0 - 320.0 * l;
  if (r2 < 0) fail(ErrorCode::domain, "counterexample_h: negative radicand");
  const double sqrt5 = std::sqrt(5.0);
  if (s <= 1.0) {
    if (r1 < 0) fail(ErrorCode::domain, "counterexample_h: negative radicand");
    return s / (4.0 * sqrt5) * (4.0 * std::sqrt(r1) + std::sqrt(r2) - 9.0);
  }
  return s / (2.0 * sqrt5) * std::sqrt(r2);
}

double counterexample_hprime(double s, double step) {
  return (counterexample_h(s + step) - counterexample_h(s - step)) / (2.0 * step);
}

CounterexampleReport counterexample_report(double step, const SolverOptions& options) {
  const double s = std::exp(-0.5);
  CounterexampleReport rep;
  const double d1 = counterexample_hprime(s, step);
  const double d2 = counterexample_hprime(s, 2.0 * step);
  rep.hprime = d1;
  // Richardson estimate of the truncation error plus rounding of the difference quotient.
  const double eps = std::numeric_limits<double>::epsilon();
  rep.error_bound = std::abs(d2 - d1) / 3.0 + eps * std::abs(counterexample_h(s)) / step;
  rep.duality_fails = std::abs(rep.hprime) > 10.0 * rep.error_bound;
  const double z = 3.0 / (8.0 * std::sqrt(5.0));
  rep.duality = duality_check(LogConcaveFunction::counterexample(), Vec::Constant(1, z), options);
  return rep;
}

}  // namespace ljf
