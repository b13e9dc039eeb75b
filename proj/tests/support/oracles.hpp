#pragma once
// Test-only reference computations. Deliberately naive and independent of the
// library code paths they check.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

namespace oracle {

inline Eigen::MatrixXd gram_loops(const Eigen::MatrixXd& X) {
  const auto n = X.rows(), p = X.cols();
  Eigen::MatrixXd g(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      double acc = 0.0;
      for (Eigen::Index k = 0; k < n; ++k) acc += X(k, i) * X(k, j);
      g(i, j) = acc / static_cast<double>(n);
    }
  }
  return g;
}

// Number of eigenvalues of A below t, by Sylvester inertia of A - tI
// (symmetric Gaussian elimination without pivoting; generic shifts only).
inline int count_below(const Eigen::MatrixXd& A, double t) {
  Eigen::MatrixXd m = A - t * Eigen::MatrixXd::Identity(A.rows(), A.cols());
  const auto n = m.rows();
  int neg = 0;
  for (Eigen::Index k = 0; k < n; ++k) {
    double piv = m(k, k);
    if (piv == 0.0) piv = -1e-300;
    if (piv < 0.0) ++neg;
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const double f = m(i, k) / piv;
      for (Eigen::Index j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
    }
  }
  return neg;
}

inline double min_eigen_bisection(const Eigen::MatrixXd& A) {
  double r = 0.0;
  for (Eigen::Index i = 0; i < A.rows(); ++i) r = std::max(r, A.row(i).cwiseAbs().sum());
  double lo = -r - 1.0, hi = r + 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (count_below(A, mid) >= 1) hi = mid; else lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Eigenvalues of [[a, b], [b, c]].
inline std::pair<double, double> eig2(double a, double b, double c) {
  const double m = 0.5 * (a + c);
  const double d = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  return {m - d, m + d};
}

// FISTA on (1/n)||Y - Xb||^2 + lambda ||b||_1.
inline Eigen::VectorXd fista_lasso(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y, double lambda,
                                   int iters = 200000) {
  const double n = static_cast<double>(X.rows());
  const Eigen::MatrixXd H = 2.0 * X.transpose() * X / n;
  const Eigen::VectorXd g0 = 2.0 * X.transpose() * Y / n;
  const double Lip = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(H).eigenvalues().maxCoeff();
  const double step = 1.0 / Lip;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(X.cols()), z = b, prev = b;
  double t = 1.0;
  for (int k = 0; k < iters; ++k) {
    const Eigen::VectorXd u = z - step * (H * z - g0);
    for (Eigen::Index j = 0; j < u.size(); ++j) {
      const double a = std::abs(u[j]) - step * lambda;
      b[j] = a > 0.0 ? std::copysign(a, u[j]) : 0.0;
    }
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    z = b + ((t - 1.0) / tn) * (b - prev);
    if ((b - prev).lpNorm<Eigen::Infinity>() < 1e-15 && k > 10) break;
    prev = b;
    t = tn;
  }
  return b;
}

inline double lasso_obj(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y, const Eigen::VectorXd& b,
                        double lambda) {
  return (Y - X * b).squaredNorm() / static_cast<double>(X.rows()) + lambda * b.lpNorm<1>();
}

// max over tau in {-1,1}^s of ||Sigma21 Sigma11^{-1} tau||_inf by enumeration.
inline double uniform_ir_enumerate(const Eigen::MatrixXd& sigma, const std::vector<int>& S) {
  const int p = static_cast<int>(sigma.rows());
  const int s = static_cast<int>(S.size());
  std::vector<int> Sc;
  for (int j = 0; j < p; ++j) {
    if (std::find(S.begin(), S.end(), j) == S.end()) Sc.push_back(j);
  }
  Eigen::MatrixXd s11(s, s), s21(Sc.size(), s);
  for (int a = 0; a < s; ++a) {
    for (int b = 0; b < s; ++b) s11(a, b) = sigma(S[a], S[b]);
    for (std::size_t r = 0; r < Sc.size(); ++r) s21(r, a) = sigma(Sc[r], S[a]);
  }
  const Eigen::MatrixXd m = s21 * s11.inverse();
  double best = 0.0;
  for (long code = 0; code < (1L << s); ++code) {
    Eigen::VectorXd tau(s);
    for (int i = 0; i < s; ++i) tau[i] = ((code >> i) & 1L) ? -1.0 : 1.0;
    best = std::max(best, (m * tau).lpNorm<Eigen::Infinity>());
  }
  return best;
}

// Minimum-l1 interpolant by enumerating basic solutions (column subsets of
// size rank(X)). Valid for small full-row-rank X.
inline Eigen::VectorXd basis_pursuit_enumerate(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y) {
  const int n = static_cast<int>(X.rows()), p = static_cast<int>(X.cols());
  Eigen::VectorXd best;
  double best_l1 = std::numeric_limits<double>::infinity();
  std::vector<int> idx(n);
  std::function<void(int, int)> rec = [&](int start, int depth) {
    if (depth == n) {
      Eigen::MatrixXd B(n, n);
      for (int k = 0; k < n; ++k) B.col(k) = X.col(idx[k]);
      Eigen::FullPivLU<Eigen::MatrixXd> lu(B);
      if (!lu.isInvertible()) return;
      const Eigen::VectorXd z = lu.solve(Y);
      if (z.lpNorm<1>() < best_l1 - 1e-12) {
        best_l1 = z.lpNorm<1>();
        best = Eigen::VectorXd::Zero(p);
        for (int k = 0; k < n; ++k) best[idx[k]] = z[k];
      }
      return;
    }
    for (int j = start; j < p; ++j) {
      idx[depth] = j;
      rec(j + 1, depth + 1);
    }
  };
  rec(0, 0);
  return best;
}

enum class Kind { Compat, RE, Strong, Adaptive };

// Dense grid search over the slice ||D_S||_1 = 1 of the cone. D_S walks the
// l1 sphere in R^s (s-1 free coordinates plus both signs of the last), and
// D_Sc walks the l1 ball of the admissible radius (p-s-1 free coordinates,
// the last one on the grid plus both boundary endpoints). All four ratios
// are scale-invariant, so this slice covers every cone direction.
inline double grid_cone_min(Kind kind, const Eigen::MatrixXd& sigma, const std::vector<int>& S,
                            double L, int N) {
  const int p = static_cast<int>(sigma.rows());
  const int s = static_cast<int>(S.size());
  std::vector<int> Sc;
  for (int j = 0; j < p; ++j) {
    if (std::find(S.begin(), S.end(), j) == S.end()) Sc.push_back(j);
  }
  const int m = static_cast<int>(Sc.size());
  const double sqrt_s = std::sqrt(static_cast<double>(s));
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd d(p);

  auto evaluate = [&]() {
    double on1 = 0.0, on2 = 0.0, off1 = 0.0;
    for (int i : S) {
      on1 += std::abs(d[i]);
      on2 += d[i] * d[i];
    }
    for (int i : Sc) off1 += std::abs(d[i]);
    const double radius = kind == Kind::Adaptive ? L * sqrt_s * std::sqrt(on2) : L * on1;
    if (off1 > radius * (1.0 + 1e-12) + 1e-15) return;
    const double q = d.dot(sigma * d);
    double v = 0.0;
    switch (kind) {
      case Kind::Compat: v = static_cast<double>(s) * q / (on1 * on1); break;
      case Kind::RE: v = q / on2; break;
      case Kind::Strong: v = q / d.squaredNorm(); break;
      case Kind::Adaptive: v = q / on2; break;
    }
    best = std::min(best, v);
  };

  auto grid = [&](double lo, double hi, int k) { return lo + (hi - lo) * k / (N - 1); };

  // Off-support: recursive walk over m coordinates, budget = remaining radius.
  std::function<void(int, double)> walk_off = [&](int k, double budget) {
    if (k == m - 1) {
      const int col = Sc[k];
      for (int g = 0; g < N; ++g) {
        const double v = grid(-budget, budget, g);
        d[col] = v;
        evaluate();
      }
      return;
    }
    const int col = Sc[k];
    for (int g = 0; g < N; ++g) {
      const double v = grid(-budget, budget, g);
      d[col] = v;
      walk_off(k + 1, budget - std::abs(v));
    }
  };

  std::function<void(int, double)> walk_on = [&](int k, double rest) {
    const int col = S[k];
    if (k == s - 1) {
      for (double sg : {1.0, -1.0}) {
        d[col] = sg * rest;
        double on1 = 0.0, on2 = 0.0;
        for (int i : S) {
          on1 += std::abs(d[i]);
          on2 += d[i] * d[i];
        }
        const double radius = kind == Kind::Adaptive ? L * sqrt_s * std::sqrt(on2) : L * on1;
        walk_off(0, radius);
        if (rest == 0.0) break;
      }
      return;
    }
    for (int g = 0; g < N; ++g) {
      const double v = grid(-rest, rest, g);
      d[col] = v;
      walk_on(k + 1, rest - std::abs(v));
    }
  };
  walk_on(0, 1.0);
  return best;
}

}  // namespace oracle
