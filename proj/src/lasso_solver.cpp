#include "sparselab/lasso_solver.hpp"

#include "sparselab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sparselab {

LassoProblem::LassoProblem(DesignMatrix x, Eigen::VectorXd y, double lam)
    : X(std::move(x)), Y(std::move(y)), lambda(lam) {
  if (Y.size() != X.rows()) throw ArgumentError("response length must equal the number of rows");
  if (!Y.allFinite()) throw ArgumentError("response contains non-finite entries");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ArgumentError("lambda must be a finite nonnegative number");
  }
}

double lasso_objective(const DesignMatrix& X, const Eigen::VectorXd& Y, const CoefVector& beta,
                       double lambda) {
  const double n = static_cast<double>(X.rows());
  return (Y - X.matrix() * beta).squaredNorm() / n + lambda * beta.lpNorm<1>();
}

KktReport kkt_report(const DesignMatrix& X, const Eigen::VectorXd& Y, const CoefVector& beta,
                     double lambda, double kkt_tol) {
  if (beta.size() != X.cols() || Y.size() != X.rows()) {
    throw ArgumentError("kkt_report: dimension mismatch");
  }
  const double n = static_cast<double>(X.rows());
  const Eigen::VectorXd grad = (2.0 / n) * (X.matrix().transpose() * (Y - X.matrix() * beta));
  KktReport rep;
  for (Index j = 0; j < beta.size(); ++j) {
    if (beta[j] == 0.0) {
      rep.max_inactive_violation =
          std::max(rep.max_inactive_violation, std::abs(grad[j]) - lambda);
    } else {
      rep.max_active_violation =
          std::max(rep.max_active_violation, std::abs(grad[j] - lambda * sign(beta[j])));
    }
  }
  rep.satisfied = rep.max_inactive_violation <= kkt_tol && rep.max_active_violation <= kkt_tol;
  return rep;
}

LassoSolution solve_lasso(const LassoProblem& problem, const SolverOptions& opts,
                          const std::optional<CoefVector>& warm_start) {
  const auto& x = problem.X.matrix();
  const Index n = x.rows();
  const Index p = x.cols();
  const double lambda = problem.lambda;

  if (opts.max_iters <= 0 || !(opts.tol > 0.0) || !(opts.kkt_tol > 0.0)) {
    throw ArgumentError("solver options must be positive");
  }

  const Eigen::VectorXd colsq = x.colwise().squaredNorm();
  CoefVector beta = CoefVector::Zero(p);
  if (warm_start) {
    if (warm_start->size() != p) throw ArgumentError("warm start has wrong length");
    beta = *warm_start;
    for (Index j = 0; j < p; ++j) {
      if (colsq[j] == 0.0) beta[j] = 0.0;
    }
  }

  Eigen::VectorXd r = problem.Y - x * beta;
  const double half_n_lambda = 0.5 * static_cast<double>(n) * lambda;

  LassoSolution sol;
  long sweep = 0;
  while (sweep < opts.max_iters) {
    ++sweep;
    double max_change = 0.0;
    for (Index j = 0; j < p; ++j) {
      if (colsq[j] == 0.0) continue;
      const double old = beta[j];
      const double z = old + x.col(j).dot(r) / colsq[j];
      const double updated = soft_threshold(z, half_n_lambda / colsq[j]);
      const double diff = updated - old;
      if (diff != 0.0) {
        r.noalias() -= diff * x.col(j);
        beta[j] = updated;
        max_change = std::max(max_change, std::abs(diff));
      }
    }
    if (sweep % 1000 == 0) r = problem.Y - x * beta;  // limit drift of the running residual
    if (opts.record_trace) {
      sol.objective_trace.push_back(r.squaredNorm() / static_cast<double>(n) +
                                    lambda * beta.lpNorm<1>());
    }
    if (max_change < opts.tol) {
      sol.converged = true;
      break;
    }
  }

  sol.beta = std::move(beta);
  sol.iterations = sweep;
  sol.objective = lasso_objective(problem.X, problem.Y, sol.beta, lambda);
  const KktReport kkt = kkt_report(problem.X, problem.Y, sol.beta, lambda, opts.kkt_tol);
  sol.kkt_residual = std::max({0.0, kkt.max_inactive_violation, kkt.max_active_violation});
  return sol;
}

LassoSolution solve_noiseless_lasso(const DesignMatrix& X, const CoefVector& beta0, double lambda,
                                    const SolverOptions& opts) {
  if (!(lambda > 0.0)) throw ArgumentError("noiseless Lasso requires lambda > 0");
  if (beta0.size() != X.cols()) throw ArgumentError("beta0 length must equal the number of columns");
  return solve_lasso(LassoProblem(X, X.matrix() * beta0, lambda), opts);
}

namespace {

// Least-squares refit on the sign pattern of `beta`. Returns the refit when it
// interpolates Y and keeps every sign; the Lasso KKT multipliers then certify
// it as a minimum-l1 solution.
std::optional<CoefVector> polish_on_support(const DesignMatrix& X, const Eigen::VectorXd& Y,
                                            const CoefVector& beta, double feas_tol) {
  const Support S = support_of(beta, 0.0);
  if (S.empty()) return std::nullopt;
  const Eigen::MatrixXd xs = X.matrix()(Eigen::all, S.indices());
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(xs);
  const Eigen::VectorXd bs = cod.solve(Y);
  CoefVector out = CoefVector::Zero(beta.size());
  for (Index k = 0; k < S.size(); ++k) {
    if (sign(bs[k]) != sign(beta[S[k]])) return std::nullopt;
    out[S[k]] = bs[k];
  }
  if ((X.matrix() * out - Y).norm() > feas_tol) return std::nullopt;
  return out;
}

}  // namespace

CoefVector solve_bplp(const DesignMatrix& X, const Eigen::VectorXd& Y, const SolverOptions& opts) {
  if (Y.size() != X.rows()) throw ArgumentError("solve_bplp: response length mismatch");
  const auto& x = X.matrix();
  const double ynorm = Y.norm();

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(x);
  const Eigen::VectorXd ls = cod.solve(Y);
  if ((x * ls - Y).norm() > 1e-8 * (1.0 + ynorm)) {
    throw InfeasibleError("solve_bplp: Y is not in the column span of X");
  }
  if (ynorm == 0.0) return CoefVector::Zero(x.cols());

  const double n = static_cast<double>(x.rows());
  const double feas_tol = 1e-6 * (1.0 + ynorm);
  double lambda = (2.0 / n) * (x.transpose() * Y).cwiseAbs().maxCoeff();
  CoefVector beta = CoefVector::Zero(x.cols());
  double prev_l1 = std::numeric_limits<double>::infinity();

  constexpr int kMaxStages = 200;
  for (int stage = 0; stage < kMaxStages && lambda > 0.0; ++stage) {
    lambda *= 0.5;
    const LassoSolution sol = solve_lasso(LassoProblem(X, Y, lambda), opts, beta);
    beta = sol.beta;

    CoefVector candidate = beta;
    if (auto refit = polish_on_support(X, Y, beta, feas_tol)) candidate = *refit;

    const bool feasible = (x * candidate - Y).norm() <= feas_tol;
    const double l1 = candidate.lpNorm<1>();
    if (feasible && std::abs(l1 - prev_l1) < 1e-9) return candidate;
    prev_l1 = l1;
  }
  throw ConvergenceError("solve_bplp: lambda continuation did not reach feasibility");
}

CoefVector ols_solve(const DesignMatrix& X, const Eigen::VectorXd& Y) {
  const auto& x = X.matrix();
  if (Y.size() != x.rows()) throw ArgumentError("ols_solve: response length mismatch");
  if (x.cols() >= x.rows()) throw ArgumentError("ols_solve: requires p < n");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
  qr.setThreshold(1e-10);
  if (qr.rank() < x.cols()) throw ArgumentError("ols_solve: design is rank deficient");
  return qr.solve(Y);
}

}  // namespace sparselab
