#include "ljf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ljf/error.hpp"
#include "ljf/geometry.hpp"

namespace ljf {

OracleResult brute_lowner_1d(const LogConcaveFunction& f, const Grid1D& a_grid, const Grid1D& b_grid,
                             const Grid1D& t_grid, int samples) {
  if (f.dim() != 1) fail(ErrorCode::dimension, "brute_lowner_1d: function must be one-dimensional");
  const auto sup = f.sup_norm();
  const auto G = level_set(f, sup.value * std::exp(-2.0)).vertices();
  const double lo = G[0](0), hi = G[1](0);
  const double mid = 0.5 * (lo + hi), w = hi - lo;
  std::vector<double> xs, psis;
  for (int k = 0; k < samples; ++k) xs.push_back(mid - 2 * w + 4 * w * k / (samples - 1));
  xs.push_back(lo);
  xs.push_back(hi);
  for (double x : xs) psis.push_back(f.psi(Vec::Constant(1, x)));

  OracleResult best{Vec(), Mat(), {a_grid.count, b_grid.count, t_grid.count}, kInf};
  for (int i = 0; i < a_grid.count; ++i) {
    const double a = a_grid.at(i);
    if (!(a > 0)) continue;
    for (int j = 0; j < b_grid.count; ++j) {
      const double b = b_grid.at(j);
      double tmin = -kInf;
      for (std::size_t k = 0; k < xs.size(); ++k)
        if (std::isfinite(psis[k])) tmin = std::max(tmin, a * std::abs(xs[k] + b) - psis[k]);
      // Smallest grid t with t >= tmin.
      int lo_k = 0, hi_k = t_grid.count;
      while (lo_k < hi_k) {
        const int m = (lo_k + hi_k) / 2;
        if (t_grid.at(m) >= tmin) hi_k = m;
        else lo_k = m + 1;
      }
      if (lo_k == t_grid.count) continue;
      const double t = t_grid.at(lo_k);
      const double obj = 2.0 * std::exp(t) / a;
      if (obj < best.objective) best = OracleResult{Vec{{a, b, t}}, Mat(), best.resolution, obj};
    }
  }
  if (!std::isfinite(best.objective)) fail(ErrorCode::bracket, "brute_lowner_1d: no feasible grid point");
  return best;
}

OracleResult brute_john_1d(const LogConcaveFunction& f, const Grid1D& s_grid, const Grid1D& a_grid,
                           const Grid1D& b_grid) {
  if (f.dim() != 1) fail(ErrorCode::dimension, "brute_john_1d: function must be one-dimensional");
  OracleResult best{Vec(), Mat(), {s_grid.count, a_grid.count, b_grid.count}, -kInf};
  for (int j = 0; j < b_grid.count; ++j) {
    const double b = b_grid.at(j);
    for (int i = 0; i < a_grid.count; ++i) {
      const double a = a_grid.at(i);
      if (!(a > 0)) continue;
      const double worst = std::max(f.psi(Vec::Constant(1, b - a)), f.psi(Vec::Constant(1, b + a)));
      if (!std::isfinite(worst)) continue;
      const double smax = std::exp(-worst);
      // Largest grid s with s <= smax.
      int lo_k = -1, hi_k = s_grid.count - 1;
      while (lo_k < hi_k) {
        const int m = (lo_k + hi_k + 1) / 2;
        if (s_grid.at(m) <= smax) lo_k = m;
        else hi_k = m - 1;
      }
      if (lo_k < 0) continue;
      const double s = s_grid.at(lo_k);
      if (s * a > best.objective) best = OracleResult{Vec{{s, a, b}}, Mat(), best.resolution, s * a};
    }
  }
  if (!std::isfinite(best.objective)) fail(ErrorCode::bracket, "brute_john_1d: no feasible grid point");
  return best;
}

OracleResult brute_centered_mvie_2d(const SymmetricPolytope& P, int angle_steps, int axis_steps) {
  if (P.dim() != 2) fail(ErrorCode::dimension, "brute_centered_mvie_2d: polytope must be two-dimensional");
  const Mat& A = P.normals();
  const Vec& b = P.bounds();
  OracleResult best{Vec(), Mat(), {angle_steps, axis_steps}, -kInf};
  for (int k = 0; k < angle_steps; ++k) {
    const double th = std::numbers::pi * k / angle_steps;
    const Eigen::Vector2d r1(std::cos(th), std::sin(th)), r2(-std::sin(th), std::cos(th));
    const Vec p = A * r1, q = A * r2;
    double amax = kInf;
    for (int i = 0; i < A.rows(); ++i)
      if (std::abs(p(i)) > 0) amax = std::min(amax, b(i) / std::abs(p(i)));
    for (int j = 1; j <= axis_steps; ++j) {
      const double alpha = amax * j / axis_steps;
      double beta2 = kInf;
      for (int i = 0; i < A.rows(); ++i) {
        const double room = b(i) * b(i) - alpha * alpha * p(i) * p(i);
        if (room < 0) {
          beta2 = -1;
          break;
        }
        if (q(i) * q(i) > 0) beta2 = std::min(beta2, room / (q(i) * q(i)));
      }
      if (!(beta2 > 0) || !std::isfinite(beta2)) continue;
      const double beta = std::sqrt(beta2);
      if (alpha * beta > best.objective) {
        Eigen::Matrix2d R;
        R << r1, r2;
        const Mat T = R * Eigen::Vector2d(alpha, beta).asDiagonal() * R.transpose();
        best = OracleResult{Vec{{th, alpha, beta}}, T, best.resolution, alpha * beta};
      }
    }
  }
  return best;
}

}  // namespace ljf
