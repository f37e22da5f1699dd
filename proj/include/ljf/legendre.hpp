#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ljf/core.hpp"

namespace ljf {

struct Conjugate1D {
  std::vector<double> ys;
  std::vector<double> values;
};

// max_i (y x_i - v_i) over the finite samples, for every y. No convexity requirement; xs sorted.
// Returns -inf when no sample is finite.
std::vector<double> conjugate_of_samples(const std::vector<double>& xs, const std::vector<double>& values,
                                         const std::vector<double>& ys);

// Slope range of the finite samples, widened by max(1, span) at ends where psi becomes +inf.
std::pair<double, double> dual_window(const std::vector<double>& xs, const std::vector<double>& psi);

// Discrete Legendre transform of convex samples (checked to relative 1e-9).
std::vector<double> llt_1d(const std::vector<double>& xs, const std::vector<double>& psi,
                           const std::vector<double>& ys);
// Same, on a uniform grid over the automatic dual window (dual_points = 0 keeps xs.size()).
Conjugate1D llt_1d(const std::vector<double>& xs, const std::vector<double>& psi, int dual_points = 0);

// Transform of gridded samples by nested per-axis passes; +inf outside the dual window.
GridFunction legendre_nd(const GridFunction& g, int dual_points_per_axis = 0);

enum class Provenance { closed_form, grid_llt };
std::string provenance_name(Provenance p);

struct PolarFunction {
  LogConcaveFunction function;
  Vec center;
  Provenance provenance;
};

// e^{-L psi}. Requires 0 in the interior of supp f for integrability of the result.
LogConcaveFunction conjugate_function(const LogConcaveFunction& f, Provenance* provenance = nullptr);

// f^z = e^{-L_z psi}, L_z psi(y) = L psi(y - z) - <z, y - z>.
PolarFunction polar(const LogConcaveFunction& f, const Vec& z);

// Polar of x -> f(x - b) at 0, from the polar of f at 0: y -> f°(y) e^{-<b, y>}.
PolarFunction tilt_polar(const PolarFunction& fpolar, const Vec& b);

}  // namespace ljf
