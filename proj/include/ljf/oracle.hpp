#pragma once

#include <vector>

#include "ljf/core.hpp"
#include "ljf/polytope.hpp"

namespace ljf {

struct Grid1D {
  double lo;
  double hi;
  int count;
  double at(int k) const { return count == 1 ? lo : lo + (hi - lo) * k / (count - 1); }
  double step() const { return count > 1 ? (hi - lo) / (count - 1) : 0.0; }
};

struct OracleResult {
  Vec params;  // Löwner: (a, b, t); John: (s, a, b); mvie: (theta, alpha, beta)
  Mat T;       // mvie only
  std::vector<int> resolution;
  double objective;
};

// Exhaustive scan of 2 e^t / a over feasible (a, b, t); feasibility a|x + b| - t <= psi(x) on
// `samples` points spanning four times the width of G_f(||f|| e^-2) plus that set's endpoints.
OracleResult brute_lowner_1d(const LogConcaveFunction& f, const Grid1D& a_grid, const Grid1D& b_grid,
                             const Grid1D& t_grid, int samples = 4096);

// Maximises s a over s 1_{[b - a, b + a]} <= f; for convex psi the endpoints decide feasibility.
OracleResult brute_john_1d(const LogConcaveFunction& f, const Grid1D& s_grid, const Grid1D& a_grid,
                           const Grid1D& b_grid);

// Scans T = R(theta) diag(alpha, beta) R(theta)^T, beta maximal for each (theta, alpha).
OracleResult brute_centered_mvie_2d(const SymmetricPolytope& P, int angle_steps = 720, int axis_steps = 2000);

}  // namespace ljf
