#pragma once

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ljf/polytope.hpp"

namespace ljf {

// Convex nondecreasing phi on [0, R]: sum_k c_k r^k (c_k >= 0 for k >= 1), +inf beyond R.
// A conjugated profile evaluates the monotone conjugate rho -> sup_{0<=r<=R} rho r - phi(r).
class RadialProfile {
 public:
  RadialProfile() = default;
  static RadialProfile polynomial(std::vector<double> coefficients, double radius = kInf);

  double value(double r) const;
  // Right derivative; +inf at and beyond the end of the domain.
  double derivative(double r) const;
  // sup{r >= 0 : value(r) <= c}; negative when the set is empty.
  double inverse(double c) const;
  // Right end of the effective domain (may be +inf).
  double domain_end() const;
  RadialProfile conjugate() const;

  bool is_conjugate() const { return conjugated_; }
  const std::vector<double>& coefficients() const { return coeffs_; }
  double radius() const { return radius_; }

 private:
  double base_value(double r) const;
  double base_derivative(double r) const;
  // Maximiser of rho r - phi(r) over [0, R]; +inf when unbounded.
  double conjugate_argmax(double rho) const;
  double slope_limit() const;

  std::vector<double> coeffs_{0.0, 0.0, 0.5};
  double radius_ = kInf;
  bool conjugated_ = false;
};

class LogConcaveFunction;

struct RadialFunction {
  RadialProfile profile;
  int dim = 1;
};

// psi = I_K + offset.
struct IndicatorFunction {
  HPolytope body;
  std::vector<Vec> vertices;
  double offset = 0.0;
};

// psi = h_K + offset (the polar exponent of an indicator).
struct SupportFunction {
  HPolytope body;
  std::vector<Vec> vertices;
  double offset = 0.0;
};

struct QuadraticPiece {
  double lo;
  double hi;
  double a;
  double b;
  double c;
  double operator()(double x) const { return (a * x + b) * x + c; }
  double slope(double x) const { return 2.0 * a * x + b; }
};

// psi = a x^2 + b x + c on contiguous closed pieces, +inf outside their union.
struct PiecewiseQuadratic {
  std::vector<QuadraticPiece> pieces;
};

// Multilinear interpolation of samples; +inf outside the grid hull or next to +inf samples.
// Values are row-major with the last axis fastest.
struct GridFunction {
  std::vector<std::vector<double>> axes;
  std::vector<double> values;
};

// psi(x) = base(x - shift) + <tilt, x - shift> + offset.
struct TransformedFunction {
  std::shared_ptr<const LogConcaveFunction> base;
  Vec shift;
  Vec tilt;
  double offset = 0.0;
};

struct SupNorm {
  double value;
  Vec argmax;
};

// f = exp(-psi) with psi convex. Immutable after construction.
class LogConcaveFunction {
 public:
  using Variant = std::variant<RadialFunction, IndicatorFunction, SupportFunction, PiecewiseQuadratic, GridFunction,
                               TransformedFunction>;

  static LogConcaveFunction radial(RadialProfile profile, int dim);
  static LogConcaveFunction indicator(HPolytope body, double offset = 0.0);
  static LogConcaveFunction support(HPolytope body, double offset = 0.0);
  static LogConcaveFunction piecewise_quadratic(std::vector<QuadraticPiece> pieces);
  static LogConcaveFunction grid(std::vector<std::vector<double>> axes, std::vector<double> values);
  // Folds the transform into the base representation where a closed form exists.
  static LogConcaveFunction transformed(const LogConcaveFunction& base, const Vec& shift, const Vec& tilt,
                                        double offset = 0.0);

  static LogConcaveFunction gaussian(int dim);
  // psi = 4x^2 (x <= 0), x^2 (x > 0).
  static LogConcaveFunction counterexample();
  static LogConcaveFunction cube_indicator(int dim, double half_width = 1.0);

  int dim() const { return dim_; }
  const Variant& variant() const { return v_; }
  std::string kind() const;

  double psi(const Vec& x) const;
  double operator()(const Vec& x) const;
  SupNorm sup_norm() const;
  bool is_even() const;
  // A point of int supp f (the argmax where cheaply known).
  Vec interior_point() const;
  bool in_interior_of_support(const Vec& x) const;

 private:
  LogConcaveFunction(Variant v, int dim) : v_(std::move(v)), dim_(dim) {}

  Variant v_;
  int dim_;
};

double grid_interpolate(const GridFunction& g, const Vec& x);

// x -> exp(-||T(x + b)||_2 + t), T symmetric positive definite.
class EllipsoidalFunction {
 public:
  EllipsoidalFunction() = default;
  EllipsoidalFunction(Mat T, Vec b, double t);

  int dim() const { return static_cast<int>(b_.size()); }
  const Mat& T() const { return T_; }
  const Vec& b() const { return b_; }
  double t() const { return t_; }
  // -log of the function value.
  double exponent(const Vec& x) const { return (T_ * (x + b_)).norm() - t_; }
  double operator()(const Vec& x) const;

 private:
  Mat T_;
  Vec b_;
  double t_ = 0.0;
};

double unit_ball_volume(int n);
// n! vol(B_2^n) e^t / det T.
double ellipsoidal_integral(const EllipsoidalFunction& E);

// Symmetric positive-definite check with relative symmetry tolerance; returns the symmetrised matrix.
Mat require_spd(const Mat& T, const char* what);

}  // namespace ljf
