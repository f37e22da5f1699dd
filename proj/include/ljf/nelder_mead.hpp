#pragma once

#include <functional>

#include "ljf/polytope.hpp"

namespace ljf {

struct NelderMeadOptions {
  double initial_step = 0.1;
  double xtol = 1e-8;
  double ftol = 1e-12;
  int max_iterations = 1000;
};

struct NelderMeadResult {
  Vec x;
  double value;
  int iterations;
  bool converged;
};

// Downhill simplex with the standard coefficients (1, 2, 0.5, 0.5). +inf values are allowed
// and rejected like any worse point, so infeasible steps shrink the simplex.
NelderMeadResult nelder_mead(const std::function<double(const Vec&)>& objective, const Vec& start,
                             const NelderMeadOptions& options = {});

// Golden-section maximisation of a unimodal function on [lo, hi].
struct ScalarOptimum {
  double x;
  double value;
  int iterations;
};
ScalarOptimum golden_section_max(const std::function<double(double)>& fn, double lo, double hi, double xtol,
                                 int max_iterations = 200);

}  // namespace ljf
