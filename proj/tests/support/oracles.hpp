#pragma once

// Independent reference computations used only by the tests.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "ljf/core.hpp"

namespace ljf::testing {

// Minimum-volume enclosing ellipsoid {x : (x - c)^T A (x - c) <= 1} of a point cloud (Khachiyan).
struct Mvee {
  Eigen::MatrixXd A;
  Eigen::VectorXd c;
};

inline Mvee khachiyan_mvee(const std::vector<Eigen::VectorXd>& points, double tol = 1e-10, int max_it = 200000) {
  const int n = static_cast<int>(points[0].size());
  const int m = static_cast<int>(points.size());
  Eigen::MatrixXd Q(n + 1, m);
  for (int j = 0; j < m; ++j) {
    Q.col(j).head(n) = points[static_cast<std::size_t>(j)];
    Q(n, j) = 1.0;
  }
  Eigen::VectorXd u = Eigen::VectorXd::Constant(m, 1.0 / m);
  for (int it = 0; it < max_it; ++it) {
    const Eigen::MatrixXd X = Q * u.asDiagonal() * Q.transpose();
    const Eigen::MatrixXd Xi = X.inverse();
    Eigen::VectorXd M(m);
    for (int j = 0; j < m; ++j) M(j) = Q.col(j).dot(Xi * Q.col(j));
    int j;
    const double maximum = M.maxCoeff(&j);
    const double step = (maximum - n - 1) / ((n + 1) * (maximum - 1));
    Eigen::VectorXd nu = (1 - step) * u;
    nu(j) += step;
    const double change = (nu - u).norm();
    u = nu;
    if (change < tol) break;
  }
  Eigen::MatrixXd P(n, m);
  for (int j = 0; j < m; ++j) P.col(j) = points[static_cast<std::size_t>(j)];
  const Eigen::VectorXd c = P * u;
  const Eigen::MatrixXd S = P * u.asDiagonal() * P.transpose() - c * c.transpose();
  return Mvee{S.inverse() / n, c};
}

// max_i (y x_i - psi_i) by direct enumeration.
inline std::vector<double> brute_conjugate(const std::vector<double>& xs, const std::vector<double>& psi,
                                           const std::vector<double>& ys) {
  std::vector<double> out;
  for (double y : ys) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (std::isfinite(psi[i])) best = std::max(best, y * xs[i] - psi[i]);
    out.push_back(best);
  }
  return out;
}

// Simpson's rule on [a, b].
template <class Fn>
double simpson(Fn f, double a, double b, int intervals = 20000) {
  const double h = (b - a) / intervals;
  double acc = f(a) + f(b);
  for (int k = 1; k < intervals; ++k) acc += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
  return acc * h / 3.0;
}

inline Eigen::MatrixXd rotation_2d(double theta) {
  Eigen::MatrixXd R(2, 2);
  R << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return R;
}

inline std::vector<double> uniform(double lo, double hi, int n) {
  std::vector<double> out;
  for (int k = 0; k < n; ++k) out.push_back(lo + (hi - lo) * k / (n - 1));
  return out;
}

// Brute-force sup over every sample of a gridded function, at every dual grid point.
inline std::vector<double> brute_nd(const ljf::GridFunction& g, const std::vector<std::vector<double>>& dual) {
  const std::size_t n = g.axes.size();
  auto points = [](const std::vector<std::vector<double>>& axes) {
    std::vector<std::vector<double>> pts{{}};
    for (const auto& ax : axes) {
      std::vector<std::vector<double>> next;
      for (const auto& p : pts)
        for (double x : ax) {
          auto q = p;
          q.push_back(x);
          next.push_back(q);
        }
      pts.swap(next);
    }
    return pts;
  };
  const auto xs = points(g.axes), ys = points(dual);
  std::vector<double> out;
  for (const auto& y : ys) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (!std::isfinite(g.values[i])) continue;
      double dot = 0.0;
      for (std::size_t k = 0; k < n; ++k) dot += y[k] * xs[i][k];
      best = std::max(best, dot - g.values[i]);
    }
    out.push_back(best);
  }
  return out;
}

inline ljf::GridFunction sample_grid(const std::vector<std::vector<double>>& axes,
                                     const std::function<double(const Eigen::VectorXd&)>& psi) {
  ljf::GridFunction g{axes, {}};
  const int n = static_cast<int>(axes.size());
  std::size_t total = 1;
  for (const auto& a : axes) total *= a.size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    Eigen::VectorXd x(n);
    std::size_t rem = flat;
    for (int a = n - 1; a >= 0; --a) {
      x(a) = axes[static_cast<std::size_t>(a)][rem % axes[static_cast<std::size_t>(a)].size()];
      rem /= axes[static_cast<std::size_t>(a)].size();
    }
    g.values.push_back(psi(x));
  }
  return g;
}

}  // namespace ljf::testing
