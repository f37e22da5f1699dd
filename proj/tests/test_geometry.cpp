#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ljf/error.hpp"
#include "ljf/geometry.hpp"
#include "ljf/legendre.hpp"

using namespace ljf;

namespace {

Vec v1(double x) { return Vec::Constant(1, x); }

HPolytope regular_polygon(int m, double apothem) {
  Mat A(m, 2);
  for (int k = 0; k < m; ++k) {
    A(k, 0) = std::cos(2 * std::numbers::pi * k / m);
    A(k, 1) = std::sin(2 * std::numbers::pi * k / m);
  }
  return HPolytope(A, Vec::Constant(m, apothem));
}

HPolytope random_polygon(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.3, 2.0), ang(0, 2 * std::numbers::pi);
  const int m = 7;
  Mat A(m, 2);
  Vec c(m);
  for (int k = 0; k < m; ++k) {
    const double th = 2 * std::numbers::pi * k / m + 0.3 * std::sin(ang(rng));
    A(k, 0) = std::cos(th);
    A(k, 1) = std::sin(th);
    c(k) = u(rng);
  }
  return HPolytope(A, c);
}

}  // namespace

TEST_CASE("level sets of indicators are the body") {
  const auto sq = LogConcaveFunction::cube_indicator(2);
  const auto G = level_set(sq, 0.5);
  CHECK(hausdorff_distance(G, HPolytope::box(Vec::Constant(2, -1), Vec::Constant(2, 1))) < 1e-12);
}

TEST_CASE("gaussian level set is the unit disc up to the polygon") {
  const Discretization disc;
  const auto G = level_set(LogConcaveFunction::gaussian(2), std::exp(-0.5), disc);
  CHECK(G.rows() == disc.polygon_sides);
  for (const auto& v : G.vertices()) CHECK(v.norm() == doctest::Approx(1.0 / std::cos(std::numbers::pi / disc.polygon_sides)));
}

TEST_CASE("counterexample polar level sets match the closed form") {
  const double z = 3.0 / (8.0 * std::sqrt(5.0));
  const auto fz = polar(LogConcaveFunction::counterexample(), v1(z)).function;
  for (double s : {0.05, 0.3, 0.6065, 0.9, 1.0}) {
    const double l = std::log(s);
    const double lo = z + (3 - std::sqrt(9 - 80 * l)) / std::sqrt(5.0);
    const double hi = z + (3 + std::sqrt(9 - 320 * l)) / (4 * std::sqrt(5.0));
    const auto V = level_set(fz, s).vertices();
    CHECK(V[0](0) == doctest::Approx(lo).epsilon(1e-9));
    CHECK(V[1](0) == doctest::Approx(hi).epsilon(1e-9));
  }
  // Above 1 the set is governed by the second radicand on both sides.
  const double s = 1.01, l = std::log(s);
  const auto V = level_set(fz, s).vertices();
  CHECK(V[0](0) == doctest::Approx(z + (3 - std::sqrt(9 - 320 * l)) / (4 * std::sqrt(5.0))).epsilon(1e-9));
  CHECK(V[1](0) == doctest::Approx(z + (3 + std::sqrt(9 - 320 * l)) / (4 * std::sqrt(5.0))).epsilon(1e-9));
}

TEST_CASE("level set errors") {
  const auto g = LogConcaveFunction::gaussian(2);
  CHECK_THROWS_AS(level_set(g, 1.5), Error);
  try {
    level_set(g, 1.5);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::empty_set);
  }
  try {
    level_set(g, 0.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::argument);
  }
}

TEST_CASE("symmetrize examples") {
  const HPolytope P(Mat{{1.0}, {-1.0}}, Vec{{2.0, 1.0}});
  const auto S = symmetrize(P);
  CHECK(S.rows() == 1);
  CHECK(S.bounds()(0) == 1.0);

  const auto sq = HPolytope::box(Vec::Constant(2, -1), Vec::Constant(2, 1));
  CHECK(hausdorff_distance(symmetrize(sq).to_hpolytope(), sq) < 1e-12);

  const double r3 = std::sqrt(3.0) / 2;
  const HPolytope tri(Mat{{0.0, -1.0}, {r3, 0.5}, {-r3, 0.5}}, Vec{{1.0, 1.0, 1.0}});
  const auto hex = symmetrize(tri).to_hpolytope();
  CHECK(hex.rows() == 6);
  CHECK(hex.vertices().size() == 6);
  for (const auto& v : hex.vertices()) CHECK(v.norm() == doctest::Approx(2 / std::sqrt(3.0)));

  const HPolytope off(Mat{{1.0}, {-1.0}}, Vec{{2.0, -0.5}});
  try {
    symmetrize(off);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::center_outside);
  }
}

TEST_CASE("translate examples") {
  const auto I = HPolytope::interval(-1, 1);
  const auto V = translate(I, v1(1)).vertices();
  CHECK(V[0](0) == 0.0);
  CHECK(V[1](0) == 2.0);
  const auto sq = HPolytope::box(Vec::Constant(2, -1), Vec::Constant(2, 1));
  const auto same = translate(sq, Vec::Zero(2));
  CHECK(same.offsets() == sq.offsets());
  const auto back = translate(translate(sq, Vec{{1.0, 1.0}}), Vec{{-1.0, -1.0}});
  CHECK(back.offsets() == sq.offsets());
  CHECK(back.normals() == sq.normals());
}

TEST_CASE("hausdorff distance examples") {
  const auto sq = HPolytope::box(Vec::Constant(2, -1), Vec::Constant(2, 1));
  CHECK(hausdorff_distance(sq, sq) == 0.0);
  CHECK(hausdorff_distance(HPolytope::interval(-1, 1), HPolytope::interval(-2, 2)) == doctest::Approx(1.0));
  CHECK(hausdorff_distance(sq, regular_polygon(64, 1.0)) == doctest::Approx(std::sqrt(2.0) - 1).epsilon(1e-2));
}

TEST_CASE("symmetrize is contained in P and centrally symmetric") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.5, 2.5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto P = random_polygon(rng);
    const auto S = symmetrize(P);
    for (int k = 0; k < 200; ++k) {
      const Vec x{{u(rng), u(rng)}};
      if (S.contains(x)) {
        CHECK(P.contains(x, 1e-12));
        CHECK(S.contains(-x));
      }
    }
  }
}

TEST_CASE("level sets are nested") {
  const auto ce = LogConcaveFunction::counterexample();
  const auto fz = polar(ce, v1(0.1)).function;
  std::vector<double> ss{0.05, 0.1, 0.3, 0.5, 0.8, 0.95};
  for (const auto& f : {ce, fz, LogConcaveFunction::gaussian(2)}) {
    for (std::size_t i = 0; i + 1 < ss.size(); ++i) {
      const double top = f.sup_norm().value;
      const auto outer = level_set(f, ss[i] * top), inner = level_set(f, ss[i + 1] * top);
      for (const auto& v : inner.vertices()) CHECK(outer.contains(v, 1e-9));
    }
  }
}

TEST_CASE("level sets move continuously in s") {
  const auto f = polar(LogConcaveFunction::counterexample(), v1(0.2)).function;
  const double s = 0.4;
  double previous = kInf;
  for (double delta : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const double d = hausdorff_distance(level_set(f, s), level_set(f, s + delta));
    CHECK(d <= previous);
    previous = d;
  }
  CHECK(previous < 1e-4);
}

TEST_CASE("three-dimensional vertex enumeration") {
  const auto cube = HPolytope::box(Vec::Constant(3, -1), Vec::Constant(3, 1));
  CHECK(cube.vertices().size() == 8);
  const auto G = level_set(LogConcaveFunction::gaussian(3), std::exp(-0.5));
  const auto V = G.vertices();
  CHECK(V.size() > 100);
  for (const auto& v : V) CHECK(G.contains(v, 1e-9));
}
