#pragma once

#include <limits>
#include <vector>

#include <Eigen/Dense>

namespace ljf {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Box {
  Vec lo;
  Vec hi;

  int dim() const { return static_cast<int>(lo.size()); }
  Vec center() const { return 0.5 * (lo + hi); }
  Vec width() const { return hi - lo; }
  // Scales the box about its centre.
  Box inflated(double factor) const;
  bool contains(const Vec& x, double tol = 0.0) const;
  // Smallest distance from x to a face, relative to the box width on that axis.
  double relative_face_distance(const Vec& x) const;
};

// {x : <a_i, x> <= c_i}. Normals are stored unit length.
class HPolytope {
 public:
  HPolytope() = default;
  HPolytope(Mat normals, Vec offsets);

  static HPolytope box(const Vec& lo, const Vec& hi);
  static HPolytope interval(double lo, double hi);

  int dim() const { return static_cast<int>(normals_.cols()); }
  int rows() const { return static_cast<int>(normals_.rows()); }
  const Mat& normals() const { return normals_; }
  const Vec& offsets() const { return offsets_; }

  // max_i <a_i, x> - c_i; <= 0 inside.
  double violation(const Vec& x) const;
  bool contains(const Vec& x, double tol = 1e-12) const { return violation(x) <= tol; }

  // Vertex enumeration (2D: counter-clockwise order). Throws ErrorCode::invariant when
  // the polytope is unbounded and ErrorCode::empty_set when it has no interior.
  std::vector<Vec> vertices() const;
  bool is_bounded() const;

  Box bounding_box() const;
  Vec vertex_mean() const;
  double support(const Vec& direction) const;

  // P + v.
  HPolytope translated(const Vec& v) const;
  // {M x : x in P} for invertible M.
  HPolytope mapped(const Mat& M) const;

 private:
  Mat normals_;
  Vec offsets_;
};

// Origin-symmetric {x : |<a_i, x>| <= b_i}, b_i > 0, normals spanning R^n.
class SymmetricPolytope {
 public:
  SymmetricPolytope() = default;
  SymmetricPolytope(Mat normals, Vec bounds);

  int dim() const { return static_cast<int>(normals_.cols()); }
  int rows() const { return static_cast<int>(normals_.rows()); }
  const Mat& normals() const { return normals_; }
  const Vec& bounds() const { return bounds_; }

  bool contains(const Vec& x, double tol = 1e-12) const;
  double inner_radius() const { return bounds_.minCoeff(); }
  HPolytope to_hpolytope() const;
  // Rows in reversed order; used to test order independence.
  SymmetricPolytope permuted(const std::vector<int>& order) const;
  SymmetricPolytope mapped(const Mat& M) const;

 private:
  Mat normals_;
  Vec bounds_;
};

// Unit-sphere directions: 2 in 1D, m equally spaced in 2D, subdivided icosahedron in 3D.
std::vector<Vec> sphere_directions(int dim, int polygon_sides, int icosphere_level);

}  // namespace ljf
