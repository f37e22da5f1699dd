#include "ljf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <boost/math/tools/roots.hpp>

#include "ljf/error.hpp"

namespace ljf {

namespace {

HPolytope radial_level_set(const RadialFunction& r, double c, const Discretization& disc) {
  const double rho = r.profile.inverse(c);
  if (rho < 0) fail(ErrorCode::empty_set, "level set: s exceeds sup f");
  if (rho <= 0) fail(ErrorCode::degenerate, "level set: set has empty interior");
  const auto dirs = sphere_directions(r.dim, disc.polygon_sides, disc.icosphere_level);
  Mat A(static_cast<int>(dirs.size()), r.dim);
  for (std::size_t i = 0; i < dirs.size(); ++i) A.row(static_cast<int>(i)) = dirs[i].transpose();
  return HPolytope(A, Vec::Constant(A.rows(), rho));
}

HPolytope piecewise_level_set(const PiecewiseQuadratic& pq, double c) {
  double lo = kInf, hi = -kInf;
  for (const auto& p : pq.pieces) {
    double a = p.lo, b = p.hi;
    const double k = p.c - c;
    if (p.a > 0) {
      const double disc = p.b * p.b - 4 * p.a * k;
      if (disc < 0) continue;
      const double sq = std::sqrt(disc);
      // Stable roots of a x^2 + b x + k.
      const double q = -0.5 * (p.b + std::copysign(sq, p.b));
      double r1 = q / p.a, r2 = q != 0 ? k / q : r1;
      if (r1 > r2) std::swap(r1, r2);
      a = std::max(a, r1);
      b = std::min(b, r2);
    } else if (p.b > 0) {
      b = std::min(b, -k / p.b);
    } else if (p.b < 0) {
      a = std::max(a, -k / p.b);
    } else if (k > 0) {
      continue;
    }
    if (a > b) continue;
    lo = std::min(lo, a);
    hi = std::max(hi, b);
  }
  if (lo > hi) fail(ErrorCode::empty_set, "level set: s exceeds sup f");
  if (!std::isfinite(lo) || !std::isfinite(hi)) fail(ErrorCode::invariant, "level set: unbounded");
  if (!(hi > lo)) fail(ErrorCode::degenerate, "level set: set has empty interior");
  return HPolytope::interval(lo, hi);
}

// Convex hull (counter-clockwise) of planar points, collinear points dropped.
std::vector<Eigen::Vector2d> convex_hull_2d(std::vector<Eigen::Vector2d> pts) {
  std::sort(pts.begin(), pts.end(), [](const auto& p, const auto& q) {
    return p.x() < q.x() || (p.x() == q.x() && p.y() < q.y());
  });
  if (pts.size() < 3) return pts;
  auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<Eigen::Vector2d> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i - 1]) <= 0) --k;
    hull[k++] = pts[i - 1];
  }
  hull.resize(k - 1);
  return hull;
}

// Largest rho with psi(p + rho u) <= c. Bisection brackets the crossing while psi is +inf at the
// outer end; once psi is finite on the bracket a TOMS 748 solve on psi - c finishes it.
double ray_extent(const LogConcaveFunction& f, const Vec& p, const Vec& u, double c, double scale) {
  auto h = [&](double rho) { return f.psi(p + rho * u) - c; };
  double lo = 0.0, hi = scale;
  double hhi = h(hi);
  while (hhi <= 0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12 * scale) fail(ErrorCode::invariant, "level set: unbounded along a ray");
    hhi = h(hi);
  }
  double hlo = h(lo);
  const double width_tol = 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, hi);
  while (!std::isfinite(hhi) && hi - lo > width_tol) {
    const double mid = 0.5 * (lo + hi);
    const double hm = h(mid);
    if (hm <= 0) {
      lo = mid;
      hlo = hm;
    } else {
      hi = mid;
      hhi = hm;
    }
  }
  if (!std::isfinite(hhi) || hlo == 0.0) return lo;
  boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 3);
  std::uintmax_t iters = 100;
  const auto r = boost::math::tools::toms748_solve(h, lo, hi, hlo, hhi, tol, iters);
  // Keep the inner end so the sampled point stays in the set.
  return h(r.second) <= 0 ? r.second : r.first;
}

HPolytope ray_level_set(const LogConcaveFunction& f, double c, const Discretization& disc, const Vec& p) {
  const int n = f.dim();
  const double scale = std::max(1.0, p.norm()) * 0.25;
  if (n == 1) {
    const double up = ray_extent(f, p, Vec::Constant(1, 1.0), c, scale);
    const double down = ray_extent(f, p, Vec::Constant(1, -1.0), c, scale);
    if (!(up + down > 0)) fail(ErrorCode::degenerate, "level set: set has empty interior");
    return HPolytope::interval(p(0) - down, p(0) + up);
  }
  if (n != 2) fail(ErrorCode::dimension, "level set: generic level sets are available in 1D and 2D only");
  const auto dirs = sphere_directions(2, disc.ray_count, disc.icosphere_level);
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(dirs.size());
  for (const auto& u : dirs) {
    const double rho = ray_extent(f, p, u, c, scale);
    const Vec q = p + rho * u;
    pts.emplace_back(q(0), q(1));
  }
  const auto hull = convex_hull_2d(pts);
  if (hull.size() < 3) fail(ErrorCode::degenerate, "level set: set has empty interior");
  Mat A(static_cast<int>(hull.size()), 2);
  Vec off(static_cast<int>(hull.size()));
  int rows = 0;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const Eigen::Vector2d d = hull[(i + 1) % hull.size()] - hull[i];
    if (d.norm() <= 1e-14 * (1.0 + hull[i].norm())) continue;
    const Eigen::Vector2d nrm(d.y(), -d.x());
    A.row(rows) = nrm.transpose();
    off(rows) = nrm.dot(hull[i]);
    ++rows;
  }
  return HPolytope(A.topRows(rows), off.head(rows));
}

}  // namespace

HPolytope level_set(const LogConcaveFunction& f, double s, const Discretization& disc, const std::optional<Vec>& center) {
  if (!(s > 0) || !std::isfinite(s)) fail(ErrorCode::argument, "level set: s must be positive and finite");
  const double c = -std::log(s);
  const auto& v = f.variant();
  if (const auto* r = std::get_if<RadialFunction>(&v)) return radial_level_set(*r, c, disc);
  if (const auto* ind = std::get_if<IndicatorFunction>(&v)) {
    if (ind->offset > c) fail(ErrorCode::empty_set, "level set: s exceeds sup f");
    return ind->body;
  }
  if (const auto* sf = std::get_if<SupportFunction>(&v)) {
    const double scale = c - sf->offset;
    if (scale < 0) fail(ErrorCode::empty_set, "level set: s exceeds sup f");
    if (!(scale > 0)) fail(ErrorCode::degenerate, "level set: set has empty interior");
    Mat A(static_cast<int>(sf->vertices.size()), f.dim());
    for (std::size_t i = 0; i < sf->vertices.size(); ++i) A.row(static_cast<int>(i)) = sf->vertices[i].transpose();
    return HPolytope(A, Vec::Constant(A.rows(), scale));
  }
  if (const auto* pq = std::get_if<PiecewiseQuadratic>(&v)) return piecewise_level_set(*pq, c);

  Vec p;
  if (center) {
    p = *center;
    if (!(f.psi(p) < c)) fail(ErrorCode::center_outside, "level set: centre is not interior to the level set");
  } else {
    p = f.sup_norm().argmax;
    const double v0 = f.psi(p);
    if (v0 > c) fail(ErrorCode::empty_set, "level set: s exceeds sup f");
    if (!(v0 < c)) fail(ErrorCode::degenerate, "level set: set has empty interior");
  }
  return ray_level_set(f, c, disc, p);
}

SymmetricPolytope symmetrize(const HPolytope& P) {
  const int n = P.dim();
  std::vector<int> keep;
  std::vector<double> bounds;
  for (int i = 0; i < P.rows(); ++i) {
    const double c = P.offsets()(i);
    if (!(c > 0)) fail(ErrorCode::center_outside, "symmetrize: origin is not interior to the polytope");
    bool merged = false;
    for (std::size_t k = 0; k < keep.size(); ++k) {
      const double d = P.normals().row(keep[k]).dot(P.normals().row(i));
      if (std::abs(std::abs(d) - 1.0) <= 1e-14) {
        bounds[k] = std::min(bounds[k], c);
        merged = true;
        break;
      }
    }
    if (!merged) {
      keep.push_back(i);
      bounds.push_back(c);
    }
  }
  Mat A(static_cast<int>(keep.size()), n);
  Vec b(static_cast<int>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    A.row(static_cast<int>(k)) = P.normals().row(keep[k]);
    b(static_cast<int>(k)) = bounds[k];
  }
  return SymmetricPolytope(A, b);
}

HPolytope translate(const HPolytope& P, const Vec& v) { return P.translated(v); }

double distance_to_polytope(const HPolytope& P, const Vec& x) {
  const double scale = std::max(1.0, P.offsets().cwiseAbs().maxCoeff());
  if (P.violation(x) <= 1e-14 * scale) return 0.0;
  const int n = P.dim();
  if (n == 1) {
    const auto vs = P.vertices();
    return std::max({0.0, vs[0](0) - x(0), x(0) - vs[1](0)});
  }
  if (n == 2) {
    const auto vs = P.vertices();
    double best = kInf;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      const Vec& a = vs[i];
      const Vec& b = vs[(i + 1) % vs.size()];
      const Vec d = b - a;
      const double len2 = d.squaredNorm();
      const double t = len2 > 0 ? std::clamp((x - a).dot(d) / len2, 0.0, 1.0) : 0.0;
      best = std::min(best, (a + t * d - x).norm());
    }
    return best;
  }
  // Nearest point lies in the relative interior of a face: project onto every
  // intersection of up to n facet hyperplanes and keep feasible projections.
  const int m = P.rows();
  if (m > 100) fail(ErrorCode::argument, "distance: too many facets for exact projection in n >= 3");
  double best = kInf;
  std::vector<int> idx;
  std::function<void(int)> rec = [&](int start) {
    if (!idx.empty()) {
      const int k = static_cast<int>(idx.size());
      Mat A(k, n);
      Vec c(k);
      for (int j = 0; j < k; ++j) {
        A.row(j) = P.normals().row(idx[j]);
        c(j) = P.offsets()(idx[j]);
      }
      const Mat G = A * A.transpose();
      Eigen::FullPivLU<Mat> lu(G);
      if (lu.rank() == k) {
        const Vec lambda = lu.solve(A * x - c);
        const Vec y = x - A.transpose() * lambda;
        if (P.violation(y) <= 1e-10 * scale) best = std::min(best, (y - x).norm());
      }
    }
    if (static_cast<int>(idx.size()) == n) return;
    for (int i = start; i < m; ++i) {
      idx.push_back(i);
      rec(i + 1);
      idx.pop_back();
    }
  };
  rec(0);
  return best;
}

double hausdorff_distance(const HPolytope& P, const HPolytope& Q) {
  if (P.dim() != Q.dim()) fail(ErrorCode::dimension, "hausdorff: dimension mismatch");
  double d = 0.0;
  for (const auto& v : P.vertices()) d = std::max(d, distance_to_polytope(Q, v));
  for (const auto& v : Q.vertices()) d = std::max(d, distance_to_polytope(P, v));
  return d;
}

}  // namespace ljf
