#include <doctest.h>

#include <cmath>
#include <random>

#include "ljf/error.hpp"
#include "ljf/legendre.hpp"
#include "support/oracles.hpp"

using namespace ljf;
using ljf::testing::brute_nd;
using ljf::testing::sample_grid;
using ljf::testing::uniform;

namespace {

Vec v1(double x) { return Vec::Constant(1, x); }
Vec v2(double x, double y) { return Vec{{x, y}}; }

}  // namespace

TEST_CASE("llt_1d: half square is self-dual") {
  const auto xs = uniform(-5, 5, 1001);
  std::vector<double> psi;
  for (double x : xs) psi.push_back(x * x / 2);
  const auto ys = uniform(-4, 4, 161);
  const auto out = llt_1d(xs, psi, ys);
  for (std::size_t j = 0; j < ys.size(); ++j) CHECK(std::abs(out[j] - ys[j] * ys[j] / 2) <= 1e-3);
}

TEST_CASE("llt_1d: absolute value and interval indicator are a dual pair") {
  const auto xs = uniform(-5, 5, 201);
  std::vector<double> psi;
  for (double x : xs) psi.push_back(std::abs(x));
  const auto conj = llt_1d(xs, psi);
  CHECK(conj.ys.front() == doctest::Approx(-1.0));
  CHECK(conj.ys.back() == doctest::Approx(1.0));
  for (double v : conj.values) CHECK(std::abs(v) <= 1e-12);

  const auto xi = uniform(-2, 2, 81);
  std::vector<double> ind;
  for (double x : xi) ind.push_back(std::abs(x) <= 1 + 1e-12 ? 0.0 : kInf);
  const auto ys = uniform(-3, 3, 61);
  const auto out = llt_1d(xi, ind, ys);
  for (std::size_t j = 0; j < ys.size(); ++j) CHECK(out[j] == doctest::Approx(std::abs(ys[j])));
}

TEST_CASE("llt_1d agrees with brute force and is convex") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = 0.1 + std::abs(u(rng)), b = u(rng), c = std::abs(u(rng));
    const auto xs = uniform(-3, 3, 97);
    std::vector<double> psi;
    for (double x : xs) psi.push_back(a * x * x + b * x + c * std::abs(x - 0.3));
    const auto conj = llt_1d(xs, psi);
    const auto brute = testing::brute_conjugate(xs, psi, conj.ys);
    for (std::size_t j = 0; j < brute.size(); ++j)
      CHECK(std::abs(conj.values[j] - brute[j]) <= 1e-12 * (1 + std::abs(brute[j])));
    for (std::size_t j = 1; j + 1 < conj.values.size(); ++j)
      CHECK(conj.values[j - 1] - 2 * conj.values[j] + conj.values[j + 1] >= -1e-12 * (1 + std::abs(conj.values[j])));
  }
}

TEST_CASE("llt_1d reverses order") {
  const auto xs = uniform(-2, 2, 101);
  std::vector<double> p1, p2;
  for (double x : xs) {
    p1.push_back(x * x / 2);
    p2.push_back(x * x / 2 + 0.1 * x * x + 0.05);
  }
  const auto ys = uniform(-3, 3, 121);
  const auto l1 = llt_1d(xs, p1, ys), l2 = llt_1d(xs, p2, ys);
  for (std::size_t j = 0; j < ys.size(); ++j) CHECK(l1[j] >= l2[j]);
}

TEST_CASE("llt_1d rejects non-convex samples") {
  const auto xs = uniform(-1, 1, 5);
  const std::vector<double> psi{0, 1, 0, 1, 0};
  try {
    llt_1d(xs, psi);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::convexity);
  }
}

TEST_CASE("legendre_nd closed forms") {
  const auto ax = uniform(-4, 4, 161);
  const auto half = legendre_nd(sample_grid({ax, ax}, [](const Vec& x) { return x.squaredNorm() / 2; }));
  for (double y1 : {-2.0, -0.5, 0.0, 1.3})
    for (double y2 : {-1.7, 0.0, 2.2}) CHECK(std::abs(grid_interpolate(half, v2(y1, y2)) - (y1 * y1 + y2 * y2) / 2) <= 2e-3);

  const auto box = uniform(-2, 2, 41);
  const auto sq = legendre_nd(sample_grid({box, box}, [](const Vec& x) { return x.cwiseAbs().maxCoeff() <= 1 + 1e-12 ? 0.0 : kInf; }));
  const auto brute = brute_nd(sample_grid({box, box}, [](const Vec& x) { return x.cwiseAbs().maxCoeff() <= 1 + 1e-12 ? 0.0 : kInf; }),
                              sq.axes);
  for (std::size_t i = 0; i < sq.values.size(); ++i) {
    CHECK(sq.values[i] == doctest::Approx(brute[i]));
  }
  for (double y1 : {-0.5, 0.0, 0.7})
    for (double y2 : {-0.2, 0.9}) CHECK(grid_interpolate(sq, v2(y1, y2)) == doctest::Approx(std::abs(y1) + std::abs(y2)));
}

TEST_CASE("legendre_nd of a random quadratic inverts the form") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 3; ++trial) {
    const Mat B = Mat::NullaryExpr(2, 2, [&] { return 0.3 * nd(rng); });
    const Mat Q = B * B.transpose() + Mat::Identity(2, 2);
    const auto ax = uniform(-6, 6, 601);
    const auto g = legendre_nd(sample_grid({ax, ax}, [&](const Vec& x) { return x.dot(Q * x) / 2; }), 601);
    const Mat Qi = Q.inverse();
    for (double y1 : {-1.0, 0.0, 0.8})
      for (double y2 : {-0.6, 0.4}) {
        const Vec y = v2(y1, y2);
        CHECK(std::abs(grid_interpolate(g, y) - y.dot(Qi * y) / 2) <= 1e-3);
        // On the grid nodes the nested passes agree with the quadratic form to the discretisation error.
      }
    const Vec y = v2(0.0, 0.0);
    CHECK(std::abs(grid_interpolate(g, y)) <= 1e-4);
  }
}

TEST_CASE("legendre_nd equals brute force on small grids") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int n : {1, 2, 3}) {
    for (int size : {5, 9, 17, 33}) {
      if (n == 3 && size > 17) continue;
      std::vector<std::vector<double>> axes(static_cast<std::size_t>(n), uniform(-1.5, 1.5, size));
      const Vec centre = Vec::NullaryExpr(n, [&] { return 0.3 * u(rng); });
      const double w = 0.5 + std::abs(u(rng));
      const auto g = sample_grid(axes, [&](const Vec& x) {
        if ((x - centre).norm() > 1.4) return kInf;
        return w * (x - centre).squaredNorm() + (x - centre).cwiseAbs().sum() + 0.2 * x(0);
      });
      const auto conj = legendre_nd(g);
      const auto brute = brute_nd(g, conj.axes);
      for (std::size_t i = 0; i < brute.size(); ++i)
        CHECK(std::abs(conj.values[i] - brute[i]) <= 1e-12 * (1 + std::abs(brute[i])));
    }
  }
}

TEST_CASE("legendre_nd equals brute force on a 33 cube") {
  const auto ax = uniform(-1, 1, 33);
  const auto g = sample_grid({ax, ax, ax}, [](const Vec& x) { return x.squaredNorm() + 0.3 * x(0) * x(1) + std::abs(x(2)); });
  const auto conj = legendre_nd(g, 9);
  const auto brute = brute_nd(g, conj.axes);
  for (std::size_t i = 0; i < brute.size(); ++i) CHECK(std::abs(conj.values[i] - brute[i]) <= 1e-12 * (1 + std::abs(brute[i])));
}

TEST_CASE("polar closed forms") {
  const auto g = LogConcaveFunction::gaussian(2);
  const auto gp = polar(g, Vec::Zero(2));
  CHECK(gp.provenance == Provenance::closed_form);
  for (double y : {0.0, 0.5, 2.0}) CHECK(gp.function(v2(y, -y)) == doctest::Approx(g(v2(y, -y))));

  const auto cp = polar(LogConcaveFunction::cube_indicator(2), Vec::Zero(2));
  for (double y1 : {-1.5, 0.0, 0.3})
    for (double y2 : {-0.2, 2.0}) CHECK(cp.function(v2(y1, y2)) == doctest::Approx(std::exp(-std::abs(y1) - std::abs(y2))));

  const double z = 3.0 / (8.0 * std::sqrt(5.0));
  const auto fz = polar(LogConcaveFunction::counterexample(), v1(z)).function;
  for (double x : {-2.0, -0.5, 0.0, z, 0.5, 1.0, 3.0}) {
    const double u = x - z;
    const double expected = u <= 0 ? z * u - u * u / 16 : z * u - u * u / 4;
    CHECK(std::log(fz(v1(x))) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("polar requires an interior centre") {
  try {
    polar(LogConcaveFunction::cube_indicator(2), v2(2, 0));
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::center_outside);
  }
}

TEST_CASE("tilt_polar") {
  const auto g = LogConcaveFunction::gaussian(1);
  const auto base = polar(g, Vec::Zero(1));
  const auto same = tilt_polar(base, Vec::Zero(1));
  for (double y : {-1.0, 0.2, 3.0}) CHECK(same.function(v1(y)) == base.function(v1(y)));

  const auto tilted = tilt_polar(base, v1(1.0));
  const auto direct = polar(LogConcaveFunction::transformed(g, v1(1.0), Vec::Zero(1)), Vec::Zero(1));
  for (double y : {-2.0, -0.3, 0.0, 1.1}) {
    CHECK(std::abs(tilted.function(v1(y)) - std::exp(-y * y / 2 - y)) <= 1e-6);
    CHECK(std::abs(tilted.function(v1(y)) - direct.function(v1(y))) <= 1e-6);
  }

  const auto ind = polar(LogConcaveFunction::cube_indicator(1), Vec::Zero(1));
  const auto ti = tilt_polar(ind, v1(0.5));
  for (double y : {-2.0, -0.4, 0.0, 0.9}) {
    // Direct sup of x y over x in [-1, 1] + 0.5.
    double best = -kInf;
    for (int k = 0; k <= 2000; ++k) best = std::max(best, (-0.5 + 2.0 * k / 2000) * y);
    CHECK(ti.function(v1(y)) == doctest::Approx(std::exp(-best)));
    CHECK(ti.function(v1(y)) == doctest::Approx(std::exp(-std::abs(y) - y / 2)));
  }
}

TEST_CASE("polar is an involution on closed forms") {
  const std::vector<LogConcaveFunction> fs{
      LogConcaveFunction::gaussian(2), LogConcaveFunction::radial(RadialProfile::polynomial({0, 0, 0, 0, 1}), 2),
      LogConcaveFunction::cube_indicator(2)};
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.3, 1.3);
  for (const auto& f : fs) {
    const auto back = polar(polar(f, Vec::Zero(2)).function, Vec::Zero(2)).function;
    for (int k = 0; k < 100; ++k) {
      const Vec x = v2(u(rng), u(rng));
      CHECK(std::abs(back(x) - f(x)) <= 1e-6);
    }
  }
  const auto ce = LogConcaveFunction::counterexample();
  const auto ce_back = polar(polar(ce, Vec::Zero(1)).function, Vec::Zero(1)).function;
  for (double x : {-1.0, -0.2, 0.0, 0.4, 2.0}) CHECK(std::abs(ce_back(v1(x)) - ce(v1(x))) <= 1e-6);
}

TEST_CASE("grid polar involution drifts at most two cells") {
  const auto xs = uniform(-3, 3, 241);
  const double h = xs[1] - xs[0];
  std::vector<double> psi;
  for (double x : xs) psi.push_back(x * x / 2 + 0.3 * std::abs(x));
  const auto f = LogConcaveFunction::grid({xs}, psi);
  const auto back = polar(polar(f, Vec::Zero(1)).function, Vec::Zero(1)).function;
  for (double x = -2.5; x <= 2.5; x += 0.05) {
    const double slope = std::abs(x) + 0.3;
    CHECK(std::abs(back.psi(v1(x)) - f.psi(v1(x))) <= 2 * h * slope);
  }
}
