#include "ljf/mvie.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ljf/error.hpp"

namespace ljf {

namespace {

// Coordinates of a symmetric matrix in the basis E_pp, E_pq + E_qp (p < q).
struct SymBasis {
  int n;
  std::vector<std::pair<int, int>> idx;
  explicit SymBasis(int dim) : n(dim) {
    for (int p = 0; p < n; ++p)
      for (int q = p; q < n; ++q) idx.emplace_back(p, q);
  }
  int size() const { return static_cast<int>(idx.size()); }
  Mat to_matrix(const Vec& x) const {
    Mat X = Mat::Zero(n, n);
    for (int k = 0; k < size(); ++k) {
      const auto [p, q] = idx[static_cast<std::size_t>(k)];
      X(p, q) = x(k);
      X(q, p) = x(k);
    }
    return X;
  }
  // <G, E_k> for symmetric G.
  Vec inner(const Mat& G) const {
    Vec g(size());
    for (int k = 0; k < size(); ++k) {
      const auto [p, q] = idx[static_cast<std::size_t>(k)];
      g(k) = p == q ? G(p, p) : 2.0 * G(p, q);
    }
    return g;
  }
};

double barrier_value(const Mat& X, const Mat& Phi, const Vec& b2, const Vec& x, double mu, bool& ok) {
  Eigen::LLT<Mat> llt(X);
  ok = llt.info() == Eigen::Success;
  if (!ok) return -kInf;
  const Vec slack = b2 - Phi * x;
  if (!(slack.minCoeff() > 0)) {
    ok = false;
    return -kInf;
  }
  double logdet = 0.0;
  for (int i = 0; i < X.rows(); ++i) logdet += 2.0 * std::log(llt.matrixL()(i, i));
  return logdet + mu * slack.array().log().sum();
}

}  // namespace

Mat spd_sqrt(const Mat& X) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (X + X.transpose()));
  const Vec ev = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Mat R = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (R + R.transpose());
}

InscribedEllipsoid centered_mvie(const SymmetricPolytope& P, const MvieOptions& options) {
  const int n = P.dim();
  const int m = P.rows();
  const double r = P.inner_radius();
  const double bmax = P.bounds().maxCoeff();
  if (!(r > 1e-12 * std::max(1.0, bmax))) fail(ErrorCode::degenerate, "mvie: polytope has (near) empty interior");

  // Work on P / r so that the unit ball is inscribed.
  const Mat& A = P.normals();
  const Vec b = P.bounds() / r;

  if (n == 1) {
    double best = kInf;
    for (int i = 0; i < m; ++i) best = std::min(best, b(i) / std::abs(A(i, 0)));
    InscribedEllipsoid out;
    out.T = Mat::Constant(1, 1, best * r);
    out.logdet = std::log(best * r);
    for (int i = 0; i < m; ++i)
      if (b(i) / std::abs(A(i, 0)) <= best * (1 + 1e-12)) out.active_rows.push_back(i);
    out.kkt_residual = 0.0;
    out.iterations = 0;
    return out;
  }

  const SymBasis basis(n);
  const int d = basis.size();
  Mat Phi(m, d);
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < d; ++k) {
      const auto [p, q] = basis.idx[static_cast<std::size_t>(k)];
      Phi(i, k) = (p == q ? 1.0 : 2.0) * A(i, p) * A(i, q);
    }
  const Vec b2 = b.array().square();

  // Strictly feasible start: 0.9 times the inscribed unit ball.
  Vec x(d);
  for (int k = 0; k < d; ++k) {
    const auto [p, q] = basis.idx[static_cast<std::size_t>(k)];
    x(k) = p == q ? 0.81 : 0.0;
  }

  double mu = 1.0;
  int total = 0;
  Mat X = basis.to_matrix(x);
  auto stage_done = [&](double mu_now) { return mu_now <= options.mu_final && m * mu_now <= options.gap_target; };
  for (;;) {
    for (int it = 0;; ++it) {
      if (it >= options.max_newton_per_stage || total >= options.max_iterations)
        throw MvieConvergenceError("mvie: Newton iteration limit reached", spd_sqrt(X) * r);
      ++total;
      const Mat Xinv = X.llt().solve(Mat::Identity(n, n));
      const Vec slack = b2 - Phi * x;
      const Vec w = slack.cwiseInverse();
      // Gradient and Hessian of log det X + mu sum log slack_i in basis coordinates.
      Vec g = basis.inner(Xinv) - mu * Phi.transpose() * w;
      Mat H(d, d);
      for (int k = 0; k < d; ++k) {
        const Mat Ek = basis.to_matrix(Vec::Unit(d, k));
        const Mat M = Xinv * Ek * Xinv;
        H.col(k) = -basis.inner(M);
      }
      H -= mu * Phi.transpose() * w.array().square().matrix().asDiagonal() * Phi;
      H = (0.5 * (H + H.transpose())).eval();
      const Vec dx = (-H).llt().solve(g);
      const double decrement = g.dot(dx);
      if (decrement <= 1e-10) break;

      bool ok = false;
      const double f0 = barrier_value(X, Phi, b2, x, mu, ok);
      double step = 1.0;
      for (int ls = 0; ls < 60; ++ls, step *= 0.5) {
        const Vec xn = x + step * dx;
        const Mat Xn = basis.to_matrix(xn);
        const double f1 = barrier_value(Xn, Phi, b2, xn, mu, ok);
        if (ok && f1 >= f0 + 0.25 * step * decrement) {
          x = xn;
          X = Xn;
          break;
        }
      }
      if (!ok) break;  // no progress possible at this precision
    }
    if (stage_done(mu)) break;
    mu *= 0.5;
  }

  InscribedEllipsoid out;
  const Mat T = spd_sqrt(X);
  out.T = T * r;
  Eigen::SelfAdjointEigenSolver<Mat> es(out.T, Eigen::EigenvaluesOnly);
  out.logdet = es.eigenvalues().array().log().sum();
  const Vec slack = b2 - Phi * x;
  for (int i = 0; i < m; ++i)
    if (slack(i) / b2(i) <= 1e-6) out.active_rows.push_back(i);
  {
    // Any lambda >= 0 certifies the dual bound -log det(alpha sum lambda_i a_i a_i^T), alpha = n / sum lambda_i b_i^2.
    // Two candidates: the barrier multipliers mu / slack_i, and a least-squares fit of
    // X^{-1} = sum lambda_i a_i a_i^T on the nearly active rows.
    Eigen::SelfAdjointEigenSolver<Mat> ex(X, Eigen::EigenvaluesOnly);
    const double logdet_x = ex.eigenvalues().array().log().sum();
    auto gap_of = [&](const Vec& lambda) {
      const double lb = lambda.dot(b2);
      if (!(lb > 0)) return kInf;
      const Mat S = (n / lb) * (A.transpose() * lambda.asDiagonal() * A);
      Eigen::SelfAdjointEigenSolver<Mat> ed(S, Eigen::EigenvaluesOnly);
      if (ed.eigenvalues().minCoeff() <= 0) return kInf;
      return -ed.eigenvalues().array().log().sum() - logdet_x;
    };
    double gap = gap_of(Vec(mu * slack.cwiseInverse()));
    std::vector<int> near;
    for (int i = 0; i < m; ++i)
      if (slack(i) / b2(i) <= 1e-4) near.push_back(i);
    if (!near.empty()) {
      const Mat Xinv = X.llt().solve(Mat::Identity(n, n));
      Mat M(d, static_cast<int>(near.size()));
      for (std::size_t j = 0; j < near.size(); ++j) M.col(static_cast<int>(j)) = Phi.row(near[j]).transpose();
      // Phi rows hold the coefficients of a a^T against the vech basis; match entries of X^{-1}.
      Vec rhs(d);
      for (int k = 0; k < d; ++k) {
        const auto [p, q] = basis.idx[static_cast<std::size_t>(k)];
        rhs(k) = Xinv(p, q);
        M.row(k) /= (p == q ? 1.0 : 2.0);
      }
      const Vec fit = M.completeOrthogonalDecomposition().solve(rhs);
      Vec lambda = Vec::Zero(m);
      for (std::size_t j = 0; j < near.size(); ++j) lambda(near[j]) = std::max(fit(static_cast<int>(j)), 0.0);
      gap = std::min(gap, gap_of(lambda));
    }
    out.kkt_residual = std::max(gap, 0.0);
  }
  out.iterations = total;
  return out;
}

MvieCertificate mvie_certificate(const SymmetricPolytope& P, const Mat& T, int trials, std::uint64_t seed) {
  const int n = P.dim();
  const Mat& A = P.normals();
  const Vec& b = P.bounds();
  auto margin_of = [&](const Mat& M) {
    double worst = -kInf;
    for (int i = 0; i < P.rows(); ++i) worst = std::max(worst, (M * A.row(i).transpose()).norm() - b(i));
    return worst;
  };
  auto logdet_of = [](const Mat& M, bool& ok) {
    Eigen::SelfAdjointEigenSolver<Mat> es(M, Eigen::EigenvaluesOnly);
    ok = es.eigenvalues().minCoeff() > 0;
    return ok ? es.eigenvalues().array().log().sum() : -kInf;
  };

  MvieCertificate cert;
  cert.margin = margin_of(T);
  const double scale = std::max(1.0, b.maxCoeff());
  cert.feasible = cert.margin <= 1e-9 * scale;
  cert.locally_optimal = false;
  if (!cert.feasible) return cert;

  bool ok = false;
  const double base = logdet_of(T, ok);
  if (!ok) return cert;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double eps = 1e-4 * T.norm();
  const double allowed = std::max(cert.margin, 0.0);
  bool improvable = false;
  for (int k = 0; k < trials && !improvable; ++k) {
    Mat D(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) D(i, j) = normal(rng);
    D = (0.5 * (D + D.transpose())).eval();
    D *= eps / D.norm();
    const Mat Tp = T + D;
    if (margin_of(Tp) > allowed) continue;
    bool okp = false;
    const double v = logdet_of(Tp, okp);
    if (okp && v > base + 1e-8) improvable = true;
  }
  cert.locally_optimal = !improvable;
  return cert;
}

}  // namespace ljf
