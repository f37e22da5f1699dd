#include "ljf/core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <tuple>

#include <boost/math/tools/roots.hpp>

#include "ljf/error.hpp"
#include "ljf/nelder_mead.hpp"

namespace ljf {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Largest x in [lo, hi] with pred(x) true, pred monotone (true then false).
template <class Pred>
double bisect_last_true(Pred pred, double lo, double hi) {
  for (int it = 0; it < 200 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (pred(mid)) lo = mid;
    else hi = mid;
  }
  return lo;
}

}  // namespace

// ---------------------------------------------------------------- RadialProfile

RadialProfile RadialProfile::polynomial(std::vector<double> coefficients, double radius) {
  if (coefficients.empty()) coefficients.push_back(0.0);
  while (coefficients.size() > 1 && coefficients.back() == 0.0) coefficients.pop_back();
  for (std::size_t k = 0; k < coefficients.size(); ++k) {
    if (!std::isfinite(coefficients[k])) fail(ErrorCode::argument, "radial profile: non-finite coefficient");
    if (k >= 1 && coefficients[k] < 0)
      fail(ErrorCode::convexity, "radial profile: coefficients of r^k, k >= 1, must be nonnegative");
  }
  if (!(radius > 0)) fail(ErrorCode::argument, "radial profile: radius must be positive");
  if (!std::isfinite(radius) && coefficients.size() < 2)
    fail(ErrorCode::invariant, "radial profile: constant profile on [0, inf) is not integrable");
  RadialProfile p;
  p.coeffs_ = std::move(coefficients);
  p.radius_ = radius;
  p.conjugated_ = false;
  return p;
}

double RadialProfile::base_value(double r) const {
  r = std::max(r, 0.0);
  if (r > radius_) return kInf;
  double v = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) v = v * r + *it;
  return v;
}

double RadialProfile::base_derivative(double r) const {
  r = std::max(r, 0.0);
  if (r >= radius_) return kInf;
  double v = 0.0;
  for (std::size_t k = coeffs_.size() - 1; k >= 1; --k) v = v * r + static_cast<double>(k) * coeffs_[k];
  return v;
}

double RadialProfile::slope_limit() const {
  if (std::isfinite(radius_)) return kInf;
  if (coeffs_.size() >= 3) return kInf;
  return coeffs_.size() == 2 ? coeffs_[1] : 0.0;
}

double RadialProfile::conjugate_argmax(double rho) const {
  const double d0 = coeffs_.size() >= 2 ? coeffs_[1] : 0.0;
  if (rho <= d0) return 0.0;
  if (rho > slope_limit()) return kInf;
  double left_slope_at_end = kInf;
  if (std::isfinite(radius_)) {
    double v = 0.0;
    for (std::size_t k = coeffs_.size() - 1; k >= 1; --k) v = v * radius_ + static_cast<double>(k) * coeffs_[k];
    left_slope_at_end = v;
    if (left_slope_at_end <= rho) return radius_;
  }
  // c0 + c1 r + ck r^k: phi'(u) = c1 + k ck u^(k-1) inverts in closed form.
  int top = 0, higher = 0;
  for (std::size_t k = 2; k < coeffs_.size(); ++k)
    if (coeffs_[k] != 0.0) {
      top = static_cast<int>(k);
      ++higher;
    }
  if (higher == 1) return std::min(std::pow((rho - d0) / (top * coeffs_[static_cast<std::size_t>(top)]), 1.0 / (top - 1)), radius_);
  double hi = 1.0;
  while (hi < radius_ && base_derivative(hi) < rho) hi *= 2.0;
  hi = std::min(hi, radius_);
  auto fn = [&](double u) {
    double d1 = 0.0, d2 = 0.0;
    for (std::size_t k = coeffs_.size() - 1; k >= 1; --k) {
      d2 = d2 * u + d1;
      d1 = d1 * u + static_cast<double>(k) * coeffs_[k];
    }
    return std::make_tuple(d1 - rho, d2);
  };
  std::uintmax_t iters = 200;
  return boost::math::tools::newton_raphson_iterate(fn, 0.5 * hi, 0.0, hi, std::numeric_limits<double>::digits - 2,
                                                    iters);
}

double RadialProfile::value(double r) const {
  if (!conjugated_) return base_value(r);
  r = std::max(r, 0.0);
  const double u = conjugate_argmax(r);
  if (!std::isfinite(u)) return kInf;
  return r * u - base_value(u);
}

double RadialProfile::derivative(double r) const {
  if (!conjugated_) return base_derivative(r);
  r = std::max(r, 0.0);
  if (r >= slope_limit()) return kInf;
  return conjugate_argmax(r);
}

double RadialProfile::domain_end() const { return conjugated_ ? slope_limit() : radius_; }

double RadialProfile::inverse(double c) const {
  if (std::isnan(c)) fail(ErrorCode::argument, "radial profile: NaN level");
  if (value(0.0) > c) return -1.0;
  const double end = domain_end();
  if (std::isfinite(end) && value(end) <= c) return end;
  double hi = 1.0;
  while (value(hi) <= c) {
    hi *= 2.0;
    if (hi > 1e300) fail(ErrorCode::invariant, "radial profile: unbounded level set");
  }
  return bisect_last_true([&](double r) { return value(r) <= c; }, 0.0, hi);
}

RadialProfile RadialProfile::conjugate() const {
  RadialProfile p = *this;
  p.conjugated_ = !conjugated_;
  return p;
}

// ---------------------------------------------------------------- factories

namespace {

double grid_psi_at(const GridFunction& g, const std::vector<std::size_t>& idx) {
  std::size_t flat = 0;
  for (std::size_t a = 0; a < g.axes.size(); ++a) flat = flat * g.axes[a].size() + idx[a];
  return g.values[flat];
}

std::vector<std::size_t> grid_strides(const GridFunction& g) {
  std::vector<std::size_t> s(g.axes.size(), 1);
  for (int a = static_cast<int>(g.axes.size()) - 2; a >= 0; --a) s[a] = s[a + 1] * g.axes[a + 1].size();
  return s;
}

bool uniform_axis(const std::vector<double>& ax) {
  const double h = (ax.back() - ax.front()) / static_cast<double>(ax.size() - 1);
  for (std::size_t i = 1; i < ax.size(); ++i)
    if (std::abs((ax[i] - ax[i - 1]) - h) > 1e-9 * std::abs(h)) return false;
  return true;
}

void validate_grid(const GridFunction& g) {
  const std::size_t n = g.axes.size();
  if (n < 1 || n > 3) fail(ErrorCode::dimension, "grid function: dimension must be 1, 2 or 3");
  std::size_t total = 1;
  for (const auto& ax : g.axes) {
    if (ax.size() < 2) fail(ErrorCode::invariant, "grid function: each axis needs at least 2 points");
    for (std::size_t i = 1; i < ax.size(); ++i)
      if (!(ax[i] > ax[i - 1])) fail(ErrorCode::argument, "grid function: axes must be strictly increasing");
    total *= ax.size();
  }
  if (g.values.size() != total) fail(ErrorCode::argument, "grid function: value count does not match axes");
  for (double v : g.values)
    if (std::isnan(v) || v == -kInf) fail(ErrorCode::argument, "grid function: values must be finite or +inf");

  const auto strides = grid_strides(g);
  double vscale = 1.0;
  for (double v : g.values)
    if (std::isfinite(v)) vscale = std::max(vscale, std::abs(v));

  // Convexity and contiguity of the finite part along every axis line.
  for (std::size_t axis = 0; axis < n; ++axis) {
    const auto& ax = g.axes[axis];
    bool axis_has_two = false;
    for (std::size_t start = 0; start < total; ++start) {
      if ((start / strides[axis]) % ax.size() != 0) continue;
      int finite_count = 0;
      bool seen_finite = false, ended = false;
      double prev_slope = -kInf;
      for (std::size_t k = 0; k < ax.size(); ++k) {
        const double v = g.values[start + k * strides[axis]];
        if (std::isfinite(v)) {
          if (ended) fail(ErrorCode::convexity, "grid function: finite samples are not contiguous along an axis");
          seen_finite = true;
          ++finite_count;
          if (k > 0 && std::isfinite(g.values[start + (k - 1) * strides[axis]])) {
            const double slope = (v - g.values[start + (k - 1) * strides[axis]]) / (ax[k] - ax[k - 1]);
            const double tol = 1e-9 * std::max({1.0, std::abs(slope), std::abs(prev_slope)}) * std::max(1.0, vscale);
            if (std::isfinite(prev_slope) && slope < prev_slope - tol)
              fail(ErrorCode::convexity, "grid function: second difference below tolerance");
            prev_slope = slope;
          }
        } else if (seen_finite) {
          ended = true;
        }
      }
      axis_has_two |= finite_count >= 2;
    }
    if (!axis_has_two) fail(ErrorCode::invariant, "grid function: fewer than 2 finite samples along an axis");
  }

  // Midpoint convexity on diagonal triples of uniform grids.
  bool uniform = true;
  for (const auto& ax : g.axes) uniform &= uniform_axis(ax);
  if (uniform && n >= 2) {
    std::vector<std::size_t> idx(n);
    for (std::size_t flat = 0; flat < total; ++flat) {
      std::size_t rem = flat;
      for (std::size_t a = 0; a < n; ++a) {
        idx[a] = rem / strides[a];
        rem %= strides[a];
      }
      const double mid = g.values[flat];
      for (int sign = -1; sign <= 1; sign += 2) {
        // direction (1, sign, 1, ...) over the first two axes
        if (idx[0] == 0 || idx[0] + 1 >= g.axes[0].size()) continue;
        if (idx[1] == 0 || idx[1] + 1 >= g.axes[1].size()) continue;
        auto p = idx, q = idx;
        p[0] -= 1;
        q[0] += 1;
        if (sign > 0) {
          p[1] -= 1;
          q[1] += 1;
        } else {
          p[1] += 1;
          q[1] -= 1;
        }
        const double vp = grid_psi_at(g, p), vq = grid_psi_at(g, q);
        if (!std::isfinite(vp) || !std::isfinite(vq)) continue;
        if (!std::isfinite(mid)) fail(ErrorCode::convexity, "grid function: finite region is not convex");
        const double tol = 1e-9 * std::max({1.0, std::abs(vp), std::abs(vq), vscale});
        if (mid > 0.5 * (vp + vq) + tol) fail(ErrorCode::convexity, "grid function: midpoint convexity violated");
      }
    }
  }
}

void validate_pieces(std::vector<QuadraticPiece>& pieces) {
  std::sort(pieces.begin(), pieces.end(), [](const QuadraticPiece& p, const QuadraticPiece& q) { return p.lo < q.lo; });
  std::erase_if(pieces, [](const QuadraticPiece& p) { return !(p.hi > p.lo); });
  if (pieces.empty()) fail(ErrorCode::invariant, "piecewise quadratic: empty domain");
  for (const auto& p : pieces) {
    if (std::isnan(p.lo) || std::isnan(p.hi) || !std::isfinite(p.a) || !std::isfinite(p.b) || !std::isfinite(p.c))
      fail(ErrorCode::argument, "piecewise quadratic: invalid coefficients");
    if (p.a < 0) fail(ErrorCode::convexity, "piecewise quadratic: negative leading coefficient");
  }
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    const auto& p = pieces[i];
    const auto& q = pieces[i + 1];
    const double x = p.hi;
    if (!std::isfinite(x) || std::abs(x - q.lo) > 1e-12 * std::max(1.0, std::abs(x)))
      fail(ErrorCode::argument, "piecewise quadratic: pieces must be contiguous");
    const double scale = std::max({1.0, std::abs(p(x)), std::abs(q(x))});
    if (std::abs(p(x) - q(x)) > 1e-9 * scale) fail(ErrorCode::convexity, "piecewise quadratic: discontinuous at a junction");
    if (p.slope(x) > q.slope(x) + 1e-9 * std::max({1.0, std::abs(p.slope(x)), std::abs(q.slope(x))}))
      fail(ErrorCode::convexity, "piecewise quadratic: slope decreases at a junction");
  }
  const auto& first = pieces.front();
  const auto& last = pieces.back();
  if (first.lo == -kInf && !(first.a > 0 || first.b < 0))
    fail(ErrorCode::invariant, "piecewise quadratic: not integrable at -inf");
  if (last.hi == kInf && !(last.a > 0 || last.b > 0))
    fail(ErrorCode::invariant, "piecewise quadratic: not integrable at +inf");
}

double pq_psi(const PiecewiseQuadratic& pq, double x) {
  const auto& ps = pq.pieces;
  if (x < ps.front().lo || x > ps.back().hi || std::isnan(x)) return kInf;
  auto it = std::upper_bound(ps.begin(), ps.end(), x, [](double v, const QuadraticPiece& p) { return v < p.lo; });
  if (it != ps.begin()) --it;
  return (*it)(x);
}

std::pair<double, double> pq_argmin(const PiecewiseQuadratic& pq) {
  double best = kInf, arg = 0.0;
  for (const auto& p : pq.pieces) {
    std::vector<double> cands;
    if (p.a > 0) cands.push_back(std::clamp(-p.b / (2 * p.a), p.lo, p.hi));
    if (std::isfinite(p.lo)) cands.push_back(p.lo);
    if (std::isfinite(p.hi)) cands.push_back(p.hi);
    for (double x : cands) {
      const double v = p(x);
      if (v < best) {
        best = v;
        arg = x;
      }
    }
  }
  return {arg, best};
}

bool vertices_symmetric(const std::vector<Vec>& vs) {
  double scale = 1.0;
  for (const auto& v : vs) scale = std::max(scale, v.cwiseAbs().maxCoeff());
  for (const auto& v : vs) {
    bool found = false;
    for (const auto& w : vs)
      if ((v + w).norm() <= 1e-9 * scale) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

}  // namespace

LogConcaveFunction LogConcaveFunction::radial(RadialProfile profile, int dim) {
  if (dim < 1) fail(ErrorCode::dimension, "radial function: dimension must be >= 1");
  return LogConcaveFunction(RadialFunction{std::move(profile), dim}, dim);
}

LogConcaveFunction LogConcaveFunction::indicator(HPolytope body, double offset) {
  auto vs = body.vertices();
  const int n = body.dim();
  return LogConcaveFunction(IndicatorFunction{std::move(body), std::move(vs), offset}, n);
}

LogConcaveFunction LogConcaveFunction::support(HPolytope body, double offset) {
  if (!(body.violation(Vec::Zero(body.dim())) < 0))
    fail(ErrorCode::center_outside, "support exponent: origin must be interior to the body");
  auto vs = body.vertices();
  const int n = body.dim();
  return LogConcaveFunction(SupportFunction{std::move(body), std::move(vs), offset}, n);
}

LogConcaveFunction LogConcaveFunction::piecewise_quadratic(std::vector<QuadraticPiece> pieces) {
  validate_pieces(pieces);
  return LogConcaveFunction(PiecewiseQuadratic{std::move(pieces)}, 1);
}

LogConcaveFunction LogConcaveFunction::grid(std::vector<std::vector<double>> axes, std::vector<double> values) {
  GridFunction g{std::move(axes), std::move(values)};
  validate_grid(g);
  const int n = static_cast<int>(g.axes.size());
  return LogConcaveFunction(std::move(g), n);
}

LogConcaveFunction LogConcaveFunction::transformed(const LogConcaveFunction& base, const Vec& shift, const Vec& tilt,
                                                   double offset) {
  const int n = base.dim();
  if (shift.size() != n || tilt.size() != n) fail(ErrorCode::dimension, "transform: dimension mismatch");
  const bool no_shift = shift.isZero(0.0), no_tilt = tilt.isZero(0.0);
  if (no_shift && no_tilt && offset == 0.0) return base;

  return std::visit(
      overloaded{
          [&](const PiecewiseQuadratic& pq) {
            std::vector<QuadraticPiece> out;
            const double s = shift(0), w = tilt(0);
            for (const auto& p : pq.pieces) {
              const double b = p.b + w;
              out.push_back(QuadraticPiece{p.lo + s, p.hi + s, p.a, -2 * p.a * s + b, p.a * s * s - b * s + p.c + offset});
            }
            return piecewise_quadratic(std::move(out));
          },
          [&](const SupportFunction& sf) {
            if (!no_shift) return LogConcaveFunction(TransformedFunction{std::make_shared<const LogConcaveFunction>(base), shift, tilt, offset}, n);
            return support(sf.body.translated(tilt), sf.offset + offset);
          },
          [&](const IndicatorFunction& ind) {
            if (!no_tilt) return LogConcaveFunction(TransformedFunction{std::make_shared<const LogConcaveFunction>(base), shift, tilt, offset}, n);
            return indicator(ind.body.translated(shift), ind.offset + offset);
          },
          [&](const GridFunction& g) {
            if (!no_tilt) return LogConcaveFunction(TransformedFunction{std::make_shared<const LogConcaveFunction>(base), shift, tilt, offset}, n);
            GridFunction h = g;
            for (std::size_t a = 0; a < h.axes.size(); ++a)
              for (double& x : h.axes[a]) x += shift(static_cast<int>(a));
            for (double& v : h.values) v += offset;
            return LogConcaveFunction(std::move(h), n);
          },
          [&](const TransformedFunction& t) {
            // base_t(x - S) + <w + w', x - S> + <w, s'> + k + k'
            const Vec S = shift + t.shift;
            const Vec W = tilt + t.tilt;
            return transformed(*t.base, S, W, offset + t.offset + tilt.dot(t.shift));
          },
          [&](const RadialFunction&) {
            return LogConcaveFunction(TransformedFunction{std::make_shared<const LogConcaveFunction>(base), shift, tilt, offset}, n);
          },
      },
      base.v_);
}

LogConcaveFunction LogConcaveFunction::gaussian(int dim) {
  return radial(RadialProfile::polynomial({0.0, 0.0, 0.5}), dim);
}

LogConcaveFunction LogConcaveFunction::counterexample() {
  return piecewise_quadratic({QuadraticPiece{-kInf, 0.0, 4.0, 0.0, 0.0}, QuadraticPiece{0.0, kInf, 1.0, 0.0, 0.0}});
}

LogConcaveFunction LogConcaveFunction::cube_indicator(int dim, double half_width) {
  return indicator(HPolytope::box(Vec::Constant(dim, -half_width), Vec::Constant(dim, half_width)));
}

std::string LogConcaveFunction::kind() const {
  return std::visit(overloaded{
                        [](const RadialFunction& r) { return std::string(r.profile.is_conjugate() ? "radial-conjugate" : "radial"); },
                        [](const IndicatorFunction&) { return std::string("indicator"); },
                        [](const SupportFunction&) { return std::string("support"); },
                        [](const PiecewiseQuadratic&) { return std::string("piecewise-quadratic"); },
                        [](const GridFunction&) { return std::string("grid"); },
                        [](const TransformedFunction&) { return std::string("transformed"); },
                    },
                    v_);
}

// ---------------------------------------------------------------- evaluation

double grid_interpolate(const GridFunction& g, const Vec& x) {
  const std::size_t n = g.axes.size();
  std::vector<std::size_t> cell(n);
  std::vector<double> w(n);
  for (std::size_t a = 0; a < n; ++a) {
    const auto& ax = g.axes[a];
    const double xa = x(static_cast<int>(a));
    if (!(xa >= ax.front() && xa <= ax.back())) return kInf;
    auto it = std::upper_bound(ax.begin(), ax.end(), xa);
    std::size_t i = static_cast<std::size_t>(it - ax.begin());
    i = std::clamp<std::size_t>(i, 1, ax.size() - 1) - 1;
    cell[a] = i;
    w[a] = (xa - ax[i]) / (ax[i + 1] - ax[i]);
  }
  const auto strides = grid_strides(g);
  double acc = 0.0;
  for (std::size_t corner = 0; corner < (std::size_t{1} << n); ++corner) {
    double weight = 1.0;
    std::size_t flat = 0;
    for (std::size_t a = 0; a < n; ++a) {
      const bool up = (corner >> a) & 1u;
      weight *= up ? w[a] : 1.0 - w[a];
      flat += (cell[a] + (up ? 1 : 0)) * strides[a];
    }
    if (weight == 0.0) continue;
    const double v = g.values[flat];
    if (!std::isfinite(v)) return kInf;
    acc += weight * v;
  }
  return acc;
}

double LogConcaveFunction::psi(const Vec& x) const {
  if (x.size() != dim_) fail(ErrorCode::dimension, "psi: point dimension mismatch");
  return std::visit(overloaded{
                        [&](const RadialFunction& r) { return r.profile.value(x.norm()); },
                        [&](const IndicatorFunction& ind) {
                          const double scale = std::max(1.0, ind.body.offsets().cwiseAbs().maxCoeff());
                          return ind.body.violation(x) <= 1e-12 * scale ? ind.offset : kInf;
                        },
                        [&](const SupportFunction& sf) {
                          double h = -kInf;
                          for (const auto& v : sf.vertices) h = std::max(h, v.dot(x));
                          return h + sf.offset;
                        },
                        [&](const PiecewiseQuadratic& pq) { return pq_psi(pq, x(0)); },
                        [&](const GridFunction& g) { return grid_interpolate(g, x); },
                        [&](const TransformedFunction& t) {
                          const Vec u = x - t.shift;
                          const double v = t.base->psi(u);
                          if (!std::isfinite(v)) return v;
                          return v + t.tilt.dot(u) + t.offset;
                        },
                    },
                    v_);
}

double LogConcaveFunction::operator()(const Vec& x) const { return std::exp(-psi(x)); }

SupNorm LogConcaveFunction::sup_norm() const {
  return std::visit(
      overloaded{
          [&](const RadialFunction& r) { return SupNorm{std::exp(-r.profile.value(0.0)), Vec::Zero(dim_)}; },
          [&](const IndicatorFunction& ind) {
            Vec m = Vec::Zero(dim_);
            for (const auto& v : ind.vertices) m += v;
            return SupNorm{std::exp(-ind.offset), m / static_cast<double>(ind.vertices.size())};
          },
          [&](const SupportFunction& sf) { return SupNorm{std::exp(-sf.offset), Vec::Zero(dim_)}; },
          [&](const PiecewiseQuadratic& pq) {
            const auto [x, v] = pq_argmin(pq);
            return SupNorm{std::exp(-v), Vec::Constant(1, x)};
          },
          [&](const GridFunction& g) {
            const auto it = std::min_element(g.values.begin(), g.values.end());
            const std::size_t flat = static_cast<std::size_t>(it - g.values.begin());
            const auto strides = grid_strides(g);
            Vec arg(dim_);
            double best = *it;
            double drop = 0.0;
            std::size_t rem = flat;
            for (std::size_t a = 0; a < g.axes.size(); ++a) {
              const std::size_t i = rem / strides[a];
              rem %= strides[a];
              const auto& ax = g.axes[a];
              arg(static_cast<int>(a)) = ax[i];
              if (i == 0 || i + 1 >= ax.size()) continue;
              const double vm = g.values[flat - strides[a]], vp = g.values[flat + strides[a]];
              if (!std::isfinite(vm) || !std::isfinite(vp)) continue;
              // Newton step on the parabola through the three samples.
              const double hm = ax[i] - ax[i - 1], hp = ax[i + 1] - ax[i];
              const double d1 = (hm * hm * (vp - best) - hp * hp * (vm - best)) / (hm * hp * (hm + hp));
              const double d2 = 2.0 * (hm * (vp - best) + hp * (vm - best)) / (hm * hp * (hm + hp));
              if (!(d2 > 0)) continue;
              const double step = std::clamp(-d1 / d2, -hm, hp);
              arg(static_cast<int>(a)) += step;
              drop += d1 * step + 0.5 * d2 * step * step;
            }
            return SupNorm{std::exp(-(best + std::min(drop, 0.0))), arg};
          },
          [&](const TransformedFunction& t) {
            if (t.tilt.isZero(0.0)) {
              auto s = t.base->sup_norm();
              return SupNorm{s.value * std::exp(-t.offset), s.argmax + t.shift};
            }
            const Vec start = interior_point();
            NelderMeadOptions opt;
            opt.initial_step = 0.1;
            opt.xtol = 1e-10;
            opt.ftol = 1e-14;
            opt.max_iterations = 2000;
            const auto res = nelder_mead([&](const Vec& x) { return psi(x); }, start, opt);
            return SupNorm{std::exp(-res.value), res.x};
          },
      },
      v_);
}

bool LogConcaveFunction::is_even() const {
  return std::visit(
      overloaded{
          [&](const RadialFunction&) { return true; },
          [&](const IndicatorFunction& ind) { return vertices_symmetric(ind.vertices); },
          [&](const SupportFunction& sf) { return vertices_symmetric(sf.vertices); },
          [&](const PiecewiseQuadratic& pq) {
            std::vector<double> pts;
            for (const auto& p : pq.pieces) {
              if (std::isfinite(p.lo)) pts.push_back(p.lo);
              if (std::isfinite(p.hi)) pts.push_back(p.hi);
            }
            std::vector<double> probes{0.0, 0.5, 1.0, 2.0, 3.7};
            for (std::size_t i = 0; i + 1 < pts.size(); ++i) probes.push_back(0.5 * (pts[i] + pts[i + 1]));
            for (double x : pts) probes.push_back(x);
            for (double x : probes) {
              const double a = pq_psi(pq, x), b = pq_psi(pq, -x);
              if (std::isinf(a) || std::isinf(b)) {
                if (a != b) return false;
                continue;
              }
              if (std::abs(a - b) > 1e-12 * std::max({1.0, std::abs(a), std::abs(b)})) return false;
            }
            return true;
          },
          [&](const GridFunction& g) {
            for (const auto& ax : g.axes)
              for (std::size_t i = 0; i < ax.size(); ++i)
                if (std::abs(ax[i] + ax[ax.size() - 1 - i]) > 1e-12 * std::max(1.0, std::abs(ax[i]))) return false;
            const std::size_t total = g.values.size();
            for (std::size_t i = 0; i < total; ++i) {
              const double a = g.values[i], b = g.values[total - 1 - i];
              if (std::isinf(a) || std::isinf(b)) {
                if (a != b) return false;
                continue;
              }
              if (std::abs(a - b) > 1e-12 * std::max({1.0, std::abs(a), std::abs(b)})) return false;
            }
            return true;
          },
          [&](const TransformedFunction&) { return false; },
      },
      v_);
}

Vec LogConcaveFunction::interior_point() const {
  return std::visit(
      overloaded{
          [&](const RadialFunction&) { return Vec(Vec::Zero(dim_)); },
          [&](const IndicatorFunction&) { return sup_norm().argmax; },
          [&](const SupportFunction&) { return Vec(Vec::Zero(dim_)); },
          [&](const PiecewiseQuadratic& pq) {
            const double x = pq_argmin(pq).first;
            const double lo = pq.pieces.front().lo, hi = pq.pieces.back().hi;
            if (x > lo && x < hi) return Vec(Vec::Constant(1, x));
            if (std::isfinite(lo) && std::isfinite(hi)) return Vec(Vec::Constant(1, 0.5 * (lo + hi)));
            return Vec(Vec::Constant(1, std::isfinite(lo) ? lo + 1.0 : hi - 1.0));
          },
          [&](const GridFunction& g) {
            const Vec arg = sup_norm().argmax;
            if (in_interior_of_support(arg)) return arg;
            // Mean of finite samples lies inside their convex hull.
            const auto strides = grid_strides(g);
            Vec m = Vec::Zero(dim_);
            double count = 0;
            for (std::size_t flat = 0; flat < g.values.size(); ++flat) {
              if (!std::isfinite(g.values[flat])) continue;
              std::size_t rem = flat;
              for (std::size_t a = 0; a < g.axes.size(); ++a) {
                m(static_cast<int>(a)) += g.axes[a][rem / strides[a]];
                rem %= strides[a];
              }
              count += 1;
            }
            return Vec(m / count);
          },
          [&](const TransformedFunction& t) { return Vec(t.base->interior_point() + t.shift); },
      },
      v_);
}

bool LogConcaveFunction::in_interior_of_support(const Vec& x) const {
  if (x.size() != dim_) fail(ErrorCode::dimension, "support test: point dimension mismatch");
  return std::visit(overloaded{
                        [&](const RadialFunction& r) { return x.norm() < r.profile.domain_end(); },
                        [&](const IndicatorFunction& ind) { return ind.body.violation(x) < 0; },
                        [&](const SupportFunction&) { return true; },
                        [&](const PiecewiseQuadratic& pq) {
                          return x(0) > pq.pieces.front().lo && x(0) < pq.pieces.back().hi;
                        },
                        [&](const GridFunction&) {
                          const double delta = 1e-9 * std::max(1.0, x.norm());
                          if (!std::isfinite(psi(x))) return false;
                          for (int a = 0; a < dim_; ++a)
                            for (int s = -1; s <= 1; s += 2) {
                              Vec y = x;
                              y(a) += s * delta;
                              if (!std::isfinite(psi(y))) return false;
                            }
                          return true;
                        },
                        [&](const TransformedFunction& t) { return t.base->in_interior_of_support(x - t.shift); },
                    },
                    v_);
}

// ---------------------------------------------------------------- ellipsoidal functions

Mat require_spd(const Mat& T, const char* what) {
  if (T.rows() != T.cols() || T.rows() < 1) fail(ErrorCode::dimension, std::string(what) + ": matrix must be square");
  if (!T.allFinite()) fail(ErrorCode::argument, std::string(what) + ": matrix must be finite");
  const double scale = std::max(1e-300, T.cwiseAbs().maxCoeff());
  if ((T - T.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    fail(ErrorCode::invariant, std::string(what) + ": matrix must be symmetric");
  Mat S = 0.5 * (T + T.transpose());
  Eigen::SelfAdjointEigenSolver<Mat> es(S, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues().minCoeff() > 0))
    fail(ErrorCode::invariant, std::string(what) + ": matrix must be positive definite");
  return S;
}

EllipsoidalFunction::EllipsoidalFunction(Mat T, Vec b, double t) : T_(require_spd(T, "ellipsoidal function")), b_(std::move(b)), t_(t) {
  if (b_.size() != T_.rows()) fail(ErrorCode::dimension, "ellipsoidal function: b dimension mismatch");
  if (!std::isfinite(t_) || !b_.allFinite()) fail(ErrorCode::argument, "ellipsoidal function: t and b must be finite");
}

double EllipsoidalFunction::operator()(const Vec& x) const { return std::exp(-exponent(x)); }

double unit_ball_volume(int n) {
  return std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double ellipsoidal_integral(const EllipsoidalFunction& E) {
  const int n = E.dim();
  return std::tgamma(n + 1.0) * unit_ball_volume(n) * std::exp(E.t()) / E.T().determinant();
}

}  // namespace ljf
