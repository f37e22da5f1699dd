#include "ljf/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ljf/error.hpp"

namespace ljf {

namespace {

// Indices of the lower convex hull of finite (x, v) samples, left to right.
std::vector<std::size_t> lower_hull(const std::vector<double>& xs, const std::vector<double>& v) {
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(v[i])) continue;
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2], b = hull.back();
      // Drop b when it lies on or above the chord from a to i.
      const double lhs = (v[b] - v[a]) * (xs[i] - xs[a]);
      const double rhs = (v[i] - v[a]) * (xs[b] - xs[a]);
      if (lhs >= rhs) hull.pop_back();
      else break;
    }
    hull.push_back(i);
  }
  return hull;
}

std::vector<double> uniform(double lo, double hi, int count) {
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j)
    out[static_cast<std::size_t>(j)] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(j) / (count - 1);
  out.back() = hi;
  return out;
}

void check_convex_samples(const std::vector<double>& xs, const std::vector<double>& psi) {
  if (xs.size() != psi.size()) fail(ErrorCode::argument, "llt: size mismatch");
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (!(xs[i] > xs[i - 1])) fail(ErrorCode::argument, "llt: abscissae must be strictly increasing");
  int finite = 0;
  bool ended = false;
  double prev = -kInf;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (std::isnan(psi[i]) || psi[i] == -kInf) fail(ErrorCode::argument, "llt: values must be finite or +inf");
    if (!std::isfinite(psi[i])) {
      if (finite > 0) ended = true;
      continue;
    }
    if (ended) fail(ErrorCode::convexity, "llt: finite samples are not contiguous");
    if (finite > 0) {
      const double slope = (psi[i] - psi[i - 1]) / (xs[i] - xs[i - 1]);
      const double scale = std::max({1.0, std::abs(slope), std::abs(prev), std::abs(psi[i])});
      if (std::isfinite(prev) && slope < prev - 1e-9 * scale) fail(ErrorCode::convexity, "llt: samples are not convex");
      prev = slope;
    }
    ++finite;
  }
  if (finite < 2) fail(ErrorCode::invariant, "llt: fewer than 2 finite samples");
}

}  // namespace

std::vector<double> conjugate_of_samples(const std::vector<double>& xs, const std::vector<double>& values,
                                         const std::vector<double>& ys) {
  const auto hull = lower_hull(xs, values);
  std::vector<double> out(ys.size(), -kInf);
  if (hull.empty()) return out;
  std::vector<std::size_t> order(ys.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ys[a] < ys[b]; });
  std::size_t k = 0;
  for (std::size_t j : order) {
    const double y = ys[j];
    // Argmax over the hull is nondecreasing in y.
    while (k + 1 < hull.size() && y * xs[hull[k + 1]] - values[hull[k + 1]] >= y * xs[hull[k]] - values[hull[k]]) ++k;
    out[j] = y * xs[hull[k]] - values[hull[k]];
  }
  return out;
}

std::pair<double, double> dual_window(const std::vector<double>& xs, const std::vector<double>& psi) {
  double lo = kInf, hi = -kInf;
  bool left_wall = false, right_wall = false;
  std::size_t first = xs.size(), last = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(psi[i])) continue;
    first = std::min(first, i);
    last = i;
    if (i > 0 && std::isfinite(psi[i - 1])) {
      const double slope = (psi[i] - psi[i - 1]) / (xs[i] - xs[i - 1]);
      lo = std::min(lo, slope);
      hi = std::max(hi, slope);
    }
  }
  if (!(hi >= lo)) fail(ErrorCode::invariant, "dual window: fewer than 2 adjacent finite samples");
  left_wall = first > 0;
  right_wall = last + 1 < xs.size();
  const double widen = std::max(1.0, hi - lo);
  if (left_wall) lo -= widen;
  if (right_wall) hi += widen;
  if (hi == lo) {
    // Affine data: the slopes say nothing about the window, so use the sample span.
    const double span = std::max(1.0, xs[last] - xs[first]);
    lo -= span;
    hi += span;
  }
  if (!(hi > lo)) fail(ErrorCode::invariant, "dual window: transform is supported on a single point");
  return {lo, hi};
}

std::vector<double> llt_1d(const std::vector<double>& xs, const std::vector<double>& psi,
                           const std::vector<double>& ys) {
  check_convex_samples(xs, psi);
  return conjugate_of_samples(xs, psi, ys);
}

Conjugate1D llt_1d(const std::vector<double>& xs, const std::vector<double>& psi, int dual_points) {
  check_convex_samples(xs, psi);
  const auto [lo, hi] = dual_window(xs, psi);
  Conjugate1D out;
  out.ys = uniform(lo, hi, dual_points > 0 ? dual_points : static_cast<int>(xs.size()));
  out.values = conjugate_of_samples(xs, psi, out.ys);
  return out;
}

GridFunction legendre_nd(const GridFunction& g, int dual_points_per_axis) {
  const std::size_t n = g.axes.size();
  if (n < 1 || n > 3) fail(ErrorCode::dimension, "legendre_nd: dimension must be 1, 2 or 3");
  std::vector<std::vector<double>> axes = g.axes;
  std::vector<double> w = g.values;

  for (std::size_t a = 0; a < n; ++a) {
    std::vector<std::size_t> sizes(n);
    for (std::size_t k = 0; k < n; ++k) sizes[k] = axes[k].size();
    std::size_t stride = 1;
    for (std::size_t k = a + 1; k < n; ++k) stride *= sizes[k];
    const std::size_t len = sizes[a];
    const std::size_t outer = w.size() / (len * stride);

    // Common dual axis: union of the per-line windows.
    double lo = kInf, hi = -kInf;
    std::vector<double> line(len);
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t in = 0; in < stride; ++in) {
        for (std::size_t k = 0; k < len; ++k) line[k] = w[(o * len + k) * stride + in];
        int finite = 0;
        for (std::size_t k = 0; k + 1 < len; ++k) finite += std::isfinite(line[k]) && std::isfinite(line[k + 1]);
        if (finite == 0) continue;
        const auto [l, h] = dual_window(axes[a], line);
        lo = std::min(lo, l);
        hi = std::max(hi, h);
      }
    if (!(hi > lo)) fail(ErrorCode::invariant, "legendre_nd: empty dual window");
    const int count = dual_points_per_axis > 0 ? dual_points_per_axis : static_cast<int>(len);
    const auto ys = uniform(lo, hi, count);

    std::vector<double> next(outer * ys.size() * stride);
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t in = 0; in < stride; ++in) {
        for (std::size_t k = 0; k < len; ++k) line[k] = w[(o * len + k) * stride + in];
        const auto conj = conjugate_of_samples(axes[a], line, ys);
        // Intermediate passes store the negated partial transform, a convex function of the
        // remaining primal variables.
        for (std::size_t j = 0; j < ys.size(); ++j)
          next[(o * ys.size() + j) * stride + in] = a + 1 < n ? -conj[j] : conj[j];
      }
    axes[a] = ys;
    w.swap(next);
  }
  return GridFunction{std::move(axes), std::move(w)};
}

std::string provenance_name(Provenance p) { return p == Provenance::closed_form ? "closed-form" : "grid-LLT"; }

namespace {

LogConcaveFunction conjugate_piecewise(const PiecewiseQuadratic& pq) {
  std::vector<QuadraticPiece> out;
  const auto& ps = pq.pieces;
  // A finite end x of the domain contributes y x - psi(x) on the outward slopes.
  if (std::isfinite(ps.front().lo)) {
    const double x = ps.front().lo;
    out.push_back(QuadraticPiece{-kInf, ps.front().slope(x), 0.0, x, -ps.front()(x)});
  }
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const auto& p = ps[i];
    if (p.a > 0) {
      const double ylo = std::isfinite(p.lo) ? p.slope(p.lo) : -kInf;
      const double yhi = std::isfinite(p.hi) ? p.slope(p.hi) : kInf;
      // (y - b)^2 / (4a) - c
      if (yhi > ylo)
        out.push_back(QuadraticPiece{ylo, yhi, 1.0 / (4 * p.a), -p.b / (2 * p.a), p.b * p.b / (4 * p.a) - p.c});
    }
    if (i + 1 < ps.size()) {
      const double x = p.hi;
      const double ylo = p.slope(x), yhi = ps[i + 1].slope(x);
      if (yhi > ylo) out.push_back(QuadraticPiece{ylo, yhi, 0.0, x, -p(x)});
    }
  }
  if (std::isfinite(ps.back().hi)) {
    const double x = ps.back().hi;
    out.push_back(QuadraticPiece{ps.back().slope(x), kInf, 0.0, x, -ps.back()(x)});
  }
  // Snap junctions so the pieces are contiguous despite rounding in the slopes.
  for (std::size_t i = 0; i + 1 < out.size(); ++i) out[i + 1].lo = out[i].hi;
  return LogConcaveFunction::piecewise_quadratic(std::move(out));
}

}  // namespace

LogConcaveFunction conjugate_function(const LogConcaveFunction& f, Provenance* provenance) {
  if (provenance) *provenance = Provenance::closed_form;
  const auto& v = f.variant();
  if (const auto* r = std::get_if<RadialFunction>(&v)) return LogConcaveFunction::radial(r->profile.conjugate(), r->dim);
  if (const auto* ind = std::get_if<IndicatorFunction>(&v)) return LogConcaveFunction::support(ind->body, -ind->offset);
  if (const auto* sf = std::get_if<SupportFunction>(&v)) return LogConcaveFunction::indicator(sf->body, -sf->offset);
  if (const auto* pq = std::get_if<PiecewiseQuadratic>(&v)) return conjugate_piecewise(*pq);
  if (const auto* g = std::get_if<GridFunction>(&v)) {
    if (provenance) *provenance = Provenance::grid_llt;
    auto h = legendre_nd(*g);
    return LogConcaveFunction::grid(std::move(h.axes), std::move(h.values));
  }
  const auto& t = std::get<TransformedFunction>(v);
  const auto base = conjugate_function(*t.base, provenance);
  return LogConcaveFunction::transformed(base, t.tilt, t.shift, t.shift.dot(t.tilt) - t.offset);
}

PolarFunction polar(const LogConcaveFunction& f, const Vec& z) {
  if (z.size() != f.dim()) fail(ErrorCode::dimension, "polar: centre dimension mismatch");
  if (!f.in_interior_of_support(z)) fail(ErrorCode::center_outside, "polar: centre is not interior to supp f");
  const Vec zero = Vec::Zero(f.dim());
  Provenance prov = Provenance::closed_form;
  const auto centred = LogConcaveFunction::transformed(f, -z, zero);
  const auto conj = conjugate_function(centred, &prov);
  return PolarFunction{LogConcaveFunction::transformed(conj, z, zero), z, prov};
}

PolarFunction tilt_polar(const PolarFunction& fpolar, const Vec& b) {
  if (!fpolar.center.isZero(0.0)) fail(ErrorCode::argument, "tilt_polar: polar must be taken at the origin");
  const Vec zero = Vec::Zero(fpolar.function.dim());
  return PolarFunction{LogConcaveFunction::transformed(fpolar.function, zero, b), fpolar.center, fpolar.provenance};
}

}  // namespace ljf
