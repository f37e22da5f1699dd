#include "ljf/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ljf {

NelderMeadResult nelder_mead(const std::function<double(const Vec&)>& objective, const Vec& start,
                             const NelderMeadOptions& options) {
  const int n = static_cast<int>(start.size());
  std::vector<Vec> simplex(n + 1, start);
  std::vector<double> values(n + 1);
  for (int i = 0; i < n; ++i) simplex[i + 1](i) += options.initial_step;
  for (int i = 0; i <= n; ++i) values[i] = objective(simplex[i]);

  std::vector<int> order(n + 1);
  int it = 0;
  bool converged = false;
  for (; it < options.max_iterations; ++it) {
    std::iota(order.begin(), order.end(), 0);
    // Stable ordering keeps runs reproducible when values tie.
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return values[a] < values[b]; });
    std::vector<Vec> s2(n + 1);
    std::vector<double> v2(n + 1);
    for (int i = 0; i <= n; ++i) {
      s2[i] = simplex[order[i]];
      v2[i] = values[order[i]];
    }
    simplex.swap(s2);
    values.swap(v2);

    double size = 0.0;
    for (int i = 1; i <= n; ++i) size = std::max(size, (simplex[i] - simplex[0]).cwiseAbs().maxCoeff());
    const double spread = values[n] - values[0];
    if (size <= options.xtol && (spread <= options.ftol * std::max(1.0, std::abs(values[0])) || !std::isfinite(spread))) {
      converged = true;
      break;
    }
    if (size <= options.xtol * 1e-3) {
      converged = true;
      break;
    }

    Vec centroid = Vec::Zero(n);
    for (int i = 0; i < n; ++i) centroid += simplex[i];
    centroid /= n;

    const Vec xr = centroid + (centroid - simplex[n]);
    const double fr = objective(xr);
    if (fr < values[0]) {
      const Vec xe = centroid + 2.0 * (centroid - simplex[n]);
      const double fe = objective(xe);
      if (fe < fr) {
        simplex[n] = xe;
        values[n] = fe;
      } else {
        simplex[n] = xr;
        values[n] = fr;
      }
      continue;
    }
    if (fr < values[n - 1]) {
      simplex[n] = xr;
      values[n] = fr;
      continue;
    }
    const bool outside = fr < values[n];
    const Vec xc = outside ? Vec(centroid + 0.5 * (xr - centroid)) : Vec(centroid + 0.5 * (simplex[n] - centroid));
    const double fc = objective(xc);
    if (fc < (outside ? fr : values[n])) {
      simplex[n] = xc;
      values[n] = fc;
      continue;
    }
    for (int i = 1; i <= n; ++i) {
      simplex[i] = simplex[0] + 0.5 * (simplex[i] - simplex[0]);
      values[i] = objective(simplex[i]);
    }
  }
  int best = 0;
  for (int i = 1; i <= n; ++i)
    if (values[i] < values[best]) best = i;
  return {simplex[best], values[best], it, converged};
}

ScalarOptimum golden_section_max(const std::function<double(double)>& fn, double lo, double hi, double xtol,
                                 int max_iterations) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a), d = a + invphi * (b - a);
  double fc = fn(c), fd = fn(d);
  int it = 0;
  for (; it < max_iterations && (b - a) > xtol; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = fn(d);
    }
  }
  return fc >= fd ? ScalarOptimum{c, fc, it} : ScalarOptimum{d, fd, it};
}

}  // namespace ljf
