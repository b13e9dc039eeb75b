#include "sparselab/model_core.hpp"

#include "sparselab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sparselab {

DesignMatrix::DesignMatrix(Eigen::MatrixXd entries) : x_(std::move(entries)) {
  if (x_.rows() < 1 || x_.cols() < 1) {
    throw ArgumentError("design matrix must have at least one row and one column");
  }
  if (!x_.allFinite()) {
    throw ArgumentError("design matrix contains non-finite entries");
  }
}

GramMatrix::GramMatrix(Eigen::MatrixXd sigma) : sigma_(std::move(sigma)) {
  if (sigma_.rows() != sigma_.cols() || sigma_.rows() < 1) {
    throw ArgumentError("Gram matrix must be square and nonempty");
  }
  if (!sigma_.allFinite()) {
    throw ArgumentError("Gram matrix contains non-finite entries");
  }
  const double scale = std::max(1.0, sigma_.cwiseAbs().maxCoeff());
  if ((sigma_ - sigma_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw ArgumentError("Gram matrix is not symmetric");
  }
}

Support::Support(std::vector<Index> indices, Index p) : indices_(std::move(indices)), p_(p) {
  if (p < 0) throw ArgumentError("support ambient dimension must be nonnegative");
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (indices_[k] < 0 || indices_[k] >= p) {
      throw ArgumentError("support index " + std::to_string(indices_[k] + 1) +
                          " outside [1, " + std::to_string(p) + "]");
    }
    if (k > 0 && indices_[k] <= indices_[k - 1]) {
      throw ArgumentError("support indices must be strictly increasing");
    }
  }
}

Support Support::first(Index s, Index p) {
  if (s < 0 || s > p) throw ArgumentError("support size out of range");
  std::vector<Index> idx(static_cast<std::size_t>(s));
  for (Index k = 0; k < s; ++k) idx[static_cast<std::size_t>(k)] = k;
  return Support(std::move(idx), p);
}

Support Support::from_one_based(const std::vector<long long>& one_based, Index p) {
  std::vector<Index> idx;
  idx.reserve(one_based.size());
  for (long long j : one_based) idx.push_back(static_cast<Index>(j - 1));
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end()) {
    throw ArgumentError("support contains duplicate indices");
  }
  return Support(std::move(idx), p);
}

bool Support::contains(Index j) const {
  return std::binary_search(indices_.begin(), indices_.end(), j);
}

bool Support::is_subset_of(const Support& other) const {
  return std::includes(other.indices_.begin(), other.indices_.end(), indices_.begin(),
                       indices_.end());
}

Support Support::complement() const {
  std::vector<Index> rest;
  rest.reserve(static_cast<std::size_t>(p_ - size()));
  std::size_t k = 0;
  for (Index j = 0; j < p_; ++j) {
    if (k < indices_.size() && indices_[k] == j) {
      ++k;
    } else {
      rest.push_back(j);
    }
  }
  return Support(std::move(rest), p_);
}

std::vector<long long> Support::one_based() const {
  std::vector<long long> out;
  out.reserve(indices_.size());
  for (Index j : indices_) out.push_back(static_cast<long long>(j) + 1);
  return out;
}

std::string Support::to_string() const {
  std::ostringstream os;
  os << '{';
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    if (k) os << ',';
    os << indices_[k] + 1;
  }
  os << '}';
  return os.str();
}

Norms norms(const CoefVector& beta) {
  Norms out;
  double sumsq = 0.0;
  for (Index j = 0; j < beta.size(); ++j) {
    const double a = std::abs(beta[j]);
    if (a > 0.0) ++out.l0;
    out.l1 += a;
    sumsq += a * a;
    out.linf = std::max(out.linf, a);
  }
  out.l2 = std::sqrt(sumsq);
  return out;
}

SignVector sign_vector(const CoefVector& beta) {
  SignVector out(beta.size());
  for (Index j = 0; j < beta.size(); ++j) out[j] = sign(beta[j]);
  return out;
}

double soft_threshold(double x, double lambda) {
  if (!(lambda >= 0.0)) throw ArgumentError("soft_threshold: lambda must be nonnegative");
  const double a = std::abs(x);
  if (a < lambda) return 0.0;
  return sign(x) * (a - lambda);
}

GramMatrix gram(const DesignMatrix& X) {
  const auto& x = X.matrix();
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(x.cols(), x.cols());
  sigma.selfadjointView<Eigen::Lower>().rankUpdate(x.transpose(), 1.0 / static_cast<double>(x.rows()));
  sigma.triangularView<Eigen::StrictlyUpper>() = sigma.transpose();
  return GramMatrix(std::move(sigma));
}

Eigen::VectorXd restrict(const Eigen::VectorXd& v, const Support& S) {
  Eigen::VectorXd out(S.size());
  for (Index k = 0; k < S.size(); ++k) out[k] = v[S[k]];
  return out;
}

Eigen::MatrixXd principal_submatrix(const Eigen::MatrixXd& m, const Support& S) {
  return m(S.indices(), S.indices());
}

double l1_norm_on(const Eigen::VectorXd& v, const Support& S) {
  double acc = 0.0;
  for (Index j : S.indices()) acc += std::abs(v[j]);
  return acc;
}

PartitionedGram partition_gram(const GramMatrix& sigma, const Support& S) {
  const Index p = sigma.dim();
  if (S.ambient_dim() != p) throw ArgumentError("partition_gram: support dimension mismatch");
  if (S.empty() || S.size() == p) {
    throw ArgumentError("partition_gram: support must be nonempty and proper");
  }
  PartitionedGram out;
  out.active = S;
  out.inactive = S.complement();
  const auto& m = sigma.matrix();
  const auto& a = out.active.indices();
  const auto& b = out.inactive.indices();
  out.sigma11 = m(a, a);
  out.sigma12 = m(a, b);
  out.sigma21 = m(b, a);
  out.sigma22 = m(b, b);
  return out;
}

Support support_of(const CoefVector& beta, double tol) {
  if (!(tol >= 0.0)) throw ArgumentError("support_of: tolerance must be nonnegative");
  std::vector<Index> idx;
  for (Index j = 0; j < beta.size(); ++j) {
    if (std::abs(beta[j]) > tol) idx.push_back(j);
  }
  return Support(std::move(idx), beta.size());
}

Eigen::MatrixXd null_space_basis(const DesignMatrix& X) {
  const auto& x = X.matrix();
  const Index p = x.cols();
  const double max_col = x.colwise().norm().maxCoeff();
  if (max_col == 0.0) return Eigen::MatrixXd::Identity(p, p);

  // Row space of X is the range of X'; its orthogonal complement is null(X).
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x.transpose());
  const double tol = 1e-10 * max_col;
  const auto& r = qr.matrixQR();
  const Index diag = std::min(r.rows(), r.cols());
  Index rank = 0;
  while (rank < diag && std::abs(r(rank, rank)) > tol) ++rank;

  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(p, p);
  return q.rightCols(p - rank);
}

double min_eigen(const Eigen::MatrixXd& sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0) {
    throw ArgumentError("min_eigen: matrix must be square and nonempty");
  }
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw ArgumentError("min_eigen: matrix is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

}  // namespace sparselab
