#pragma once

#include <optional>

#include "ljf/core.hpp"
#include "ljf/polytope.hpp"

namespace ljf {

struct Discretization {
  int polygon_sides = 128;
  int ray_count = 512;
  int icosphere_level = 3;
};

// Polytopal G_f(s) = {x : f(x) >= s}. Radial, indicator, support and 1D closed forms are exact
// (radial: circumscribed regular polytope of the ball). Other 2D functions are approximated by
// the chord polygon of rays shot from `center`, which must lie in the interior of the set.
HPolytope level_set(const LogConcaveFunction& f, double s, const Discretization& disc = {},
                    const std::optional<Vec>& center = std::nullopt);

// P ∩ (-P); rows parallel up to sign are merged keeping the tighter bound.
SymmetricPolytope symmetrize(const HPolytope& P);

HPolytope translate(const HPolytope& P, const Vec& v);

// Hausdorff distance of bounded polytopes via vertex-to-body distances (n <= 3).
double hausdorff_distance(const HPolytope& P, const HPolytope& Q);

// Euclidean distance from x to the polytope (0 inside).
double distance_to_polytope(const HPolytope& P, const Vec& x);

}  // namespace ljf
