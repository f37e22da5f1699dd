#include "ljf/polytope.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

#include "ljf/error.hpp"

namespace ljf {

Box Box::inflated(double factor) const {
  const Vec c = center();
  const Vec half = 0.5 * factor * width();
  return Box{c - half, c + half};
}

bool Box::contains(const Vec& x, double tol) const {
  return ((x.array() >= lo.array() - tol) && (x.array() <= hi.array() + tol)).all();
}

double Box::relative_face_distance(const Vec& x) const {
  double best = kInf;
  for (int i = 0; i < dim(); ++i) {
    const double w = hi(i) - lo(i);
    if (w <= 0) continue;
    best = std::min({best, (x(i) - lo(i)) / w, (hi(i) - x(i)) / w});
  }
  return best;
}

HPolytope::HPolytope(Mat normals, Vec offsets) : normals_(std::move(normals)), offsets_(std::move(offsets)) {
  if (normals_.rows() != offsets_.size()) fail(ErrorCode::argument, "polytope: row count mismatch");
  if (normals_.cols() < 1) fail(ErrorCode::dimension, "polytope: dimension must be >= 1");
  for (int i = 0; i < normals_.rows(); ++i) {
    const double len = normals_.row(i).norm();
    if (!(len > 0) || !std::isfinite(len)) fail(ErrorCode::argument, "polytope: zero or non-finite normal");
    normals_.row(i) /= len;
    offsets_(i) /= len;
  }
}

HPolytope HPolytope::box(const Vec& lo, const Vec& hi) {
  const int n = static_cast<int>(lo.size());
  Mat A = Mat::Zero(2 * n, n);
  Vec c(2 * n);
  for (int i = 0; i < n; ++i) {
    A(2 * i, i) = 1.0;
    c(2 * i) = hi(i);
    A(2 * i + 1, i) = -1.0;
    c(2 * i + 1) = -lo(i);
  }
  return HPolytope(A, c);
}

HPolytope HPolytope::interval(double lo, double hi) { return box(Vec::Constant(1, lo), Vec::Constant(1, hi)); }

double HPolytope::violation(const Vec& x) const {
  if (x.size() != dim()) fail(ErrorCode::dimension, "polytope: point dimension mismatch");
  if (rows() == 0) return -kInf;
  return (normals_ * x - offsets_).maxCoeff();
}

namespace {

double scale_of(const Vec& offsets) { return std::max(1.0, offsets.cwiseAbs().maxCoeff()); }

std::vector<Vec> vertices_1d(const Mat& A, const Vec& c) {
  double lo = -kInf, hi = kInf;
  for (int i = 0; i < A.rows(); ++i) {
    if (A(i, 0) > 0) hi = std::min(hi, c(i) / A(i, 0));
    else lo = std::max(lo, c(i) / A(i, 0));
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) fail(ErrorCode::invariant, "polytope: unbounded interval");
  if (lo > hi) fail(ErrorCode::empty_set, "polytope: empty interval");
  return {Vec::Constant(1, lo), Vec::Constant(1, hi)};
}

std::vector<Eigen::Vector2d> clip_polygon(const Mat& A, const Vec& c, std::vector<Eigen::Vector2d> poly) {
  std::vector<Eigen::Vector2d> next;
  for (int i = 0; i < A.rows() && !poly.empty(); ++i) {
    const Eigen::Vector2d a(A(i, 0), A(i, 1));
    const double ci = c(i);
    next.clear();
    for (std::size_t k = 0; k < poly.size(); ++k) {
      const Eigen::Vector2d& p = poly[k];
      const Eigen::Vector2d& q = poly[(k + 1) % poly.size()];
      const double dp = a.dot(p) - ci, dq = a.dot(q) - ci;
      if (dp <= 0) next.push_back(p);
      if ((dp < 0 && dq > 0) || (dp > 0 && dq < 0)) next.push_back(p + (dp / (dp - dq)) * (q - p));
    }
    poly.swap(next);
  }
  return poly;
}

std::vector<Eigen::Vector2d> box_polygon(const Eigen::Vector2d& lo, const Eigen::Vector2d& hi) {
  return {{lo.x(), lo.y()}, {hi.x(), lo.y()}, {hi.x(), hi.y()}, {lo.x(), hi.y()}};
}

// Half-plane intersection by successive clipping of a large box; a vertex left on the box means
// the input was unbounded. A second pass from the tight bounding box removes the cancellation
// error of the first.
std::vector<Vec> vertices_2d(const Mat& A, const Vec& c) {
  const double scale = scale_of(c);
  const double big = 1e7 * scale;
  auto poly = clip_polygon(A, c, box_polygon({-big, -big}, {big, big}));
  if (poly.size() < 3) fail(ErrorCode::empty_set, "polytope: polygon has no interior");
  Eigen::Vector2d lo = poly[0], hi = poly[0];
  for (const auto& v : poly) {
    if (v.cwiseAbs().maxCoeff() >= 0.5 * big) fail(ErrorCode::invariant, "polytope: unbounded polygon");
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const double pad = 0.1 * (hi - lo).maxCoeff() + 1e-6 * scale;
  poly = clip_polygon(A, c, box_polygon(lo.array() - pad, hi.array() + pad));

  std::vector<Vec> out;
  for (const auto& v : poly) {
    if (!out.empty() && (out.back() - v).norm() <= 1e-12 * scale) continue;
    out.emplace_back(v);
  }
  if (out.size() > 1 && (out.front() - out.back()).norm() <= 1e-12 * scale) out.pop_back();
  if (out.size() < 3) fail(ErrorCode::empty_set, "polytope: polygon has no interior");
  double area = 0.0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const Vec& p = out[k];
    const Vec& q = out[(k + 1) % out.size()];
    area += p(0) * q(1) - p(1) * q(0);
  }
  if (area <= 1e-20 * scale * scale) fail(ErrorCode::empty_set, "polytope: polygon has no interior");
  return out;
}

void subsets(int m, int k, int start, std::vector<int>& cur, const std::function<void(const std::vector<int>&)>& fn) {
  if (static_cast<int>(cur.size()) == k) {
    fn(cur);
    return;
  }
  for (int i = start; i < m; ++i) {
    cur.push_back(i);
    subsets(m, k, i + 1, cur, fn);
    cur.pop_back();
  }
}

// Each facet polygon is a 2D half-plane intersection inside the facet plane.
std::vector<Vec> vertices_3d(const Mat& A, const Vec& c) {
  const int m = static_cast<int>(A.rows());
  const double scale = scale_of(c);
  std::vector<Vec> all;
  for (int i = 0; i < m; ++i) {
    const Eigen::Vector3d a = A.row(i).transpose();
    const Eigen::Vector3d p0 = a * c(i);
    Eigen::Vector3d u = a.unitOrthogonal();
    const Eigen::Vector3d v = a.cross(u);
    Mat B(m - 1, 2);
    Vec d(m - 1);
    int rows = 0;
    bool empty = false;
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      const Eigen::Vector3d aj = A.row(j).transpose();
      const Eigen::Vector2d g(aj.dot(u), aj.dot(v));
      const double rhs = c(j) - aj.dot(p0);
      if (g.norm() <= 1e-12) {
        if (rhs < -1e-12 * scale) empty = true;
        continue;
      }
      B.row(rows) = g.transpose() / g.norm();
      d(rows) = rhs / g.norm();
      ++rows;
    }
    if (empty) continue;
    std::vector<Vec> poly;
    try {
      poly = vertices_2d(B.topRows(rows), d.head(rows));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::empty_set) continue;
      throw;
    }
    for (const Vec& q : poly) all.push_back(p0 + q(0) * u + q(1) * v);
  }
  std::sort(all.begin(), all.end(), [](const Vec& x, const Vec& y) { return x(0) < y(0); });
  std::vector<Vec> out;
  const double tol = 1e-9 * scale;
  for (const Vec& x : all) {
    bool dup = false;
    for (auto it = out.rbegin(); it != out.rend() && x(0) - (*it)(0) <= tol; ++it)
      if ((*it - x).norm() <= tol) {
        dup = true;
        break;
      }
    if (!dup) out.push_back(x);
  }
  if (out.size() < 4) fail(ErrorCode::empty_set, "polytope: polytope has no interior");
  return out;
}

std::vector<Vec> vertices_nd(const Mat& A0, const Vec& c0) {
  const int n = static_cast<int>(A0.cols());
  const double scale = scale_of(c0);
  const double big = 1e7 * scale;
  const int m0 = static_cast<int>(A0.rows());
  Mat A(m0 + 2 * n, n);
  Vec c(m0 + 2 * n);
  A.topRows(m0) = A0;
  c.head(m0) = c0;
  for (int i = 0; i < n; ++i) {
    A.row(m0 + 2 * i).setZero();
    A(m0 + 2 * i, i) = 1;
    c(m0 + 2 * i) = big;
    A.row(m0 + 2 * i + 1).setZero();
    A(m0 + 2 * i + 1, i) = -1;
    c(m0 + 2 * i + 1) = big;
  }
  std::vector<Vec> out;
  bool unbounded = false;
  std::vector<int> cur;
  subsets(static_cast<int>(A.rows()), n, 0, cur, [&](const std::vector<int>& idx) {
    Mat M(n, n);
    Vec r(n);
    bool uses_sentinel = false;
    for (int k = 0; k < n; ++k) {
      M.row(k) = A.row(idx[k]);
      r(k) = c(idx[k]);
      uses_sentinel |= idx[k] >= m0;
    }
    Eigen::FullPivLU<Mat> lu(M);
    if (lu.rank() < n) return;
    const Vec x = lu.solve(r);
    if ((A * x - c).maxCoeff() > 1e-9 * scale) return;
    if (uses_sentinel) {
      unbounded = true;
      return;
    }
    for (const Vec& v : out)
      if ((v - x).norm() <= 1e-9 * scale) return;
    out.push_back(x);
  });
  if (unbounded) fail(ErrorCode::invariant, "polytope: unbounded polytope");
  if (static_cast<int>(out.size()) < n + 1) fail(ErrorCode::empty_set, "polytope: polytope has no interior");
  return out;
}

}  // namespace

std::vector<Vec> HPolytope::vertices() const {
  switch (dim()) {
    case 1: return vertices_1d(normals_, offsets_);
    case 2: return vertices_2d(normals_, offsets_);
    case 3: return vertices_3d(normals_, offsets_);
    default: return vertices_nd(normals_, offsets_);
  }
}

bool HPolytope::is_bounded() const {
  try {
    (void)vertices();
    return true;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::invariant) return false;
    throw;
  }
}

Box HPolytope::bounding_box() const {
  const auto vs = vertices();
  Vec lo = vs.front(), hi = vs.front();
  for (const Vec& v : vs) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return Box{lo, hi};
}

Vec HPolytope::vertex_mean() const {
  const auto vs = vertices();
  Vec s = Vec::Zero(dim());
  for (const Vec& v : vs) s += v;
  return s / static_cast<double>(vs.size());
}

double HPolytope::support(const Vec& direction) const {
  double best = -kInf;
  for (const Vec& v : vertices()) best = std::max(best, v.dot(direction));
  return best;
}

HPolytope HPolytope::translated(const Vec& v) const { return HPolytope(normals_, offsets_ + normals_ * v); }

HPolytope HPolytope::mapped(const Mat& M) const {
  const Mat Minv = M.inverse();
  return HPolytope(normals_ * Minv, offsets_);
}

SymmetricPolytope::SymmetricPolytope(Mat normals, Vec bounds) : normals_(std::move(normals)), bounds_(std::move(bounds)) {
  if (normals_.rows() != bounds_.size()) fail(ErrorCode::argument, "symmetric polytope: row count mismatch");
  const int n = static_cast<int>(normals_.cols());
  if (n < 1) fail(ErrorCode::dimension, "symmetric polytope: dimension must be >= 1");
  for (int i = 0; i < normals_.rows(); ++i) {
    const double len = normals_.row(i).norm();
    if (!(len > 0) || !std::isfinite(len)) fail(ErrorCode::argument, "symmetric polytope: zero normal");
    normals_.row(i) /= len;
    bounds_(i) /= len;
    if (!(bounds_(i) > 0)) fail(ErrorCode::center_outside, "symmetric polytope: origin not interior (bound <= 0)");
  }
  Eigen::FullPivLU<Mat> lu(normals_);
  if (normals_.rows() == 0 || lu.rank() < n) fail(ErrorCode::invariant, "symmetric polytope: unbounded (normals do not span)");
}

bool SymmetricPolytope::contains(const Vec& x, double tol) const {
  return ((normals_ * x).cwiseAbs() - bounds_).maxCoeff() <= tol;
}

HPolytope SymmetricPolytope::to_hpolytope() const {
  Mat A(2 * rows(), dim());
  Vec c(2 * rows());
  A << normals_, -normals_;
  c << bounds_, bounds_;
  return HPolytope(A, c);
}

SymmetricPolytope SymmetricPolytope::permuted(const std::vector<int>& order) const {
  Mat A(order.size(), dim());
  Vec b(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    A.row(i) = normals_.row(order[i]);
    b(i) = bounds_(order[i]);
  }
  return SymmetricPolytope(A, b);
}

SymmetricPolytope SymmetricPolytope::mapped(const Mat& M) const {
  return SymmetricPolytope(normals_ * M.inverse(), bounds_);
}

std::vector<Vec> sphere_directions(int dim, int polygon_sides, int icosphere_level) {
  std::vector<Vec> out;
  if (dim == 1) {
    out.push_back(Vec::Constant(1, 1.0));
    out.push_back(Vec::Constant(1, -1.0));
    return out;
  }
  if (dim == 2) {
    if (polygon_sides < 4 || polygon_sides % 2) fail(ErrorCode::argument, "polygon sides must be even and >= 4");
    for (int k = 0; k < polygon_sides; ++k) {
      const double th = 2.0 * std::numbers::pi * k / polygon_sides;
      out.push_back(Eigen::Vector2d(std::cos(th), std::sin(th)));
    }
    return out;
  }
  if (dim != 3) fail(ErrorCode::dimension, "sphere directions implemented for n <= 3");
  const double p = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Eigen::Vector3d> verts = {{-1, p, 0}, {1, p, 0}, {-1, -p, 0}, {1, -p, 0}, {0, -1, p}, {0, 1, p},
                                        {0, -1, -p}, {0, 1, -p}, {p, 0, -1}, {p, 0, 1}, {-p, 0, -1}, {-p, 0, 1}};
  for (auto& v : verts) v.normalize();
  std::vector<std::array<int, 3>> faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                                           {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                                           {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                                           {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
  for (int level = 0; level < icosphere_level; ++level) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      verts.push_back((verts[a] + verts[b]).normalized());
      const int id = static_cast<int>(verts.size()) - 1;
      mid.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(faces.size() * 4);
    for (const auto& f : faces) {
      const int a = midpoint(f[0], f[1]);
      const int b = midpoint(f[1], f[2]);
      const int c = midpoint(f[2], f[0]);
      next.push_back({f[0], a, c});
      next.push_back({f[1], b, a});
      next.push_back({f[2], c, b});
      next.push_back({a, b, c});
    }
    faces = std::move(next);
  }
  for (const auto& v : verts) out.emplace_back(v);
  return out;
}

}  // namespace ljf
