#pragma once

#include <cstdint>
#include <vector>

#include "ljf/polytope.hpp"

namespace ljf {

struct InscribedEllipsoid {
  Mat T;  // symmetric positive definite, T B ⊂ P
  double logdet;
  std::vector<int> active_rows;
  double kkt_residual;
  int iterations;
};

struct MvieOptions {
  double mu_final = 1e-10;
  double gap_target = 1e-9;  // stop once rows * mu is below this as well
  int max_newton_per_stage = 200;
  int max_iterations = 20000;
};

// max log det T over symmetric T with T B ⊂ P, solved as a max-det program in X = T^2.
InscribedEllipsoid centered_mvie(const SymmetricPolytope& P, const MvieOptions& options = {});

struct MvieCertificate {
  bool feasible;
  double margin;  // max_i ||T a_i|| - b_i
  bool locally_optimal;
};

MvieCertificate mvie_certificate(const SymmetricPolytope& P, const Mat& T, int trials = 2000,
                                 std::uint64_t seed = 12345);

// Symmetric square root of a symmetric positive definite matrix.
Mat spd_sqrt(const Mat& X);

}  // namespace ljf
