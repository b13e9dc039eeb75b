#pragma once

#include "sparselab/model_core.hpp"
#include "sparselab/rng.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace fixture {

// Identity on the first p-1 variables; the last variable has correlation rho
// with each of them.
inline Eigen::MatrixXd last_correlated_gram(double rho, Eigen::Index p = 5) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Identity(p, p);
  for (Eigen::Index j = 0; j + 1 < p; ++j) {
    g(p - 1, j) = rho;
    g(j, p - 1) = rho;
  }
  return g;
}

// n = p design whose scaled Gram is `sigma` (symmetric PSD square root).
inline Eigen::MatrixXd design_from_gram(const Eigen::MatrixXd& sigma) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
  const Eigen::VectorXd r = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return std::sqrt(static_cast<double>(sigma.rows())) * es.eigenvectors() * r.asDiagonal() *
         es.eigenvectors().transpose();
}

inline Eigen::MatrixXd gaussian(Eigen::Index n, Eigen::Index p, std::uint64_t seed) {
  sparselab::Rng rng(seed, 7);
  return rng.normal_matrix(n, p);
}

// Columns rescaled to squared norm n, so the Gram has unit diagonal.
inline Eigen::MatrixXd normalized_gaussian(Eigen::Index n, Eigen::Index p, std::uint64_t seed) {
  Eigen::MatrixXd x = gaussian(n, p, seed);
  for (Eigen::Index j = 0; j < p; ++j) x.col(j) *= std::sqrt(static_cast<double>(n)) / x.col(j).norm();
  return x;
}

// sqrt(n) times a matrix with orthonormal columns.
inline Eigen::MatrixXd orthonormal(Eigen::Index n, Eigen::Index p, std::uint64_t seed) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian(n, p, seed));
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);
  return std::sqrt(static_cast<double>(n)) * q;
}

}  // namespace fixture
