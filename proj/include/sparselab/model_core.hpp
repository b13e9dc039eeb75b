#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

namespace sparselab {

using Index = Eigen::Index;
using CoefVector = Eigen::VectorXd;
using SignVector = Eigen::VectorXi;

/// Dense n x p design. Entries are finite, n >= 1, p >= 1.
class DesignMatrix {
 public:
  explicit DesignMatrix(Eigen::MatrixXd entries);

  Index rows() const { return x_.rows(); }
  Index cols() const { return x_.cols(); }
  const Eigen::MatrixXd& matrix() const { return x_; }
  auto col(Index j) const { return x_.col(j); }

 private:
  Eigen::MatrixXd x_;
};

/// Scaled Gram matrix X'X / n.
class GramMatrix {
 public:
  /// Wraps an existing symmetric matrix (asymmetry above 1e-12 relative is
  /// rejected). Used for Gram matrices specified directly, e.g. in tests.
  explicit GramMatrix(Eigen::MatrixXd sigma);

  Index dim() const { return sigma_.rows(); }
  const Eigen::MatrixXd& matrix() const { return sigma_; }
  double operator()(Index i, Index j) const { return sigma_(i, j); }

 private:
  Eigen::MatrixXd sigma_;
};

/// Strictly increasing subset of {0, ..., p-1}. Indices are zero-based in the
/// API; text surfaces (CLI, JSON, CSV) print them one-based.
class Support {
 public:
  Support() = default;
  Support(std::vector<Index> indices, Index p);

  static Support first(Index s, Index p);
  static Support from_one_based(const std::vector<long long>& one_based, Index p);

  Index size() const { return static_cast<Index>(indices_.size()); }
  bool empty() const { return indices_.empty(); }
  Index ambient_dim() const { return p_; }
  const std::vector<Index>& indices() const { return indices_; }
  Index operator[](Index k) const { return indices_[static_cast<std::size_t>(k)]; }

  bool contains(Index j) const;
  bool is_subset_of(const Support& other) const;
  /// Complement in {0, ..., p-1}, ascending.
  Support complement() const;
  std::vector<long long> one_based() const;
  std::string to_string() const;

  friend bool operator==(const Support&, const Support&) = default;

 private:
  std::vector<Index> indices_;
  Index p_ = 0;
};

struct PartitionedGram {
  Support active;
  Support inactive;
  Eigen::MatrixXd sigma11;
  Eigen::MatrixXd sigma12;
  Eigen::MatrixXd sigma21;
  Eigen::MatrixXd sigma22;
};

struct Norms {
  Index l0 = 0;
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

Norms norms(const CoefVector& beta);

SignVector sign_vector(const CoefVector& beta);

inline int sign(double x) { return (x > 0.0) - (x < 0.0); }

/// sign(x) * max(|x| - lambda, 0). Throws ArgumentError for lambda < 0.
double soft_threshold(double x, double lambda);

GramMatrix gram(const DesignMatrix& X);

/// Blocks ordered S first then S^c. Requires S nonempty and proper.
PartitionedGram partition_gram(const GramMatrix& sigma, const Support& S);

inline constexpr double kDefaultSupportTol = 1e-8;

/// Indices with |beta_j| > tol.
Support support_of(const CoefVector& beta, double tol = kDefaultSupportTol);

/// Orthonormal basis of null(X), one column per basis vector (p x (p - rank)).
/// Rank is decided by a column-pivoted QR with tolerance 1e-10 times the
/// largest column norm of X.
Eigen::MatrixXd null_space_basis(const DesignMatrix& X);

/// Smallest eigenvalue of a symmetric matrix. Rejects asymmetry above 1e-10.
double min_eigen(const Eigen::MatrixXd& sigma);

// Sub-vector / sub-matrix helpers keyed by a support.
Eigen::VectorXd restrict(const Eigen::VectorXd& v, const Support& S);
Eigen::MatrixXd principal_submatrix(const Eigen::MatrixXd& m, const Support& S);
double l1_norm_on(const Eigen::VectorXd& v, const Support& S);

}  // namespace sparselab
