#pragma once

#include "sparselab/model_core.hpp"

#include <optional>
#include <vector>

namespace sparselab {

/// Minimize (1/n)||Y - X beta||_2^2 + lambda ||beta||_1.
struct LassoProblem {
  DesignMatrix X;
  Eigen::VectorXd Y;
  double lambda = 0.0;

  LassoProblem(DesignMatrix x, Eigen::VectorXd y, double lam);
};

struct SolverOptions {
  long max_iters = 100000;  // full coordinate sweeps
  double tol = 1e-10;       // sup-norm of the coordinate updates in one sweep
  double kkt_tol = 1e-7;
  bool record_trace = false;  // keep the objective after every sweep
};

struct LassoSolution {
  CoefVector beta;
  double objective = 0.0;
  double kkt_residual = 0.0;
  long iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;
};

struct KktReport {
  double max_inactive_violation = 0.0;
  double max_active_violation = 0.0;
  bool satisfied = false;
};

double lasso_objective(const DesignMatrix& X, const Eigen::VectorXd& Y, const CoefVector& beta,
                       double lambda);

/// Cyclic coordinate descent in ascending index order. All-zero columns keep
/// a zero coefficient. `warm_start`, when given, seeds the iterate.
LassoSolution solve_lasso(const LassoProblem& problem, const SolverOptions& opts = {},
                          const std::optional<CoefVector>& warm_start = std::nullopt);

/// Lasso with noiseless response Y = X beta0 (same 1/n objective).
LassoSolution solve_noiseless_lasso(const DesignMatrix& X, const CoefVector& beta0, double lambda,
                                    const SolverOptions& opts = {});

/// Minimum l1-norm solution of X beta = Y by lambda-continuation on the Lasso.
/// Throws InfeasibleError when Y is outside the column span of X and
/// ConvergenceError when continuation cannot reach feasibility.
CoefVector solve_bplp(const DesignMatrix& X, const Eigen::VectorXd& Y, const SolverOptions& opts = {});

/// Stationarity residuals of the Lasso subgradient system at beta.
KktReport kkt_report(const DesignMatrix& X, const Eigen::VectorXd& Y, const CoefVector& beta,
                     double lambda, double kkt_tol = SolverOptions{}.kkt_tol);

/// Ordinary least squares; requires p < n and full column rank.
CoefVector ols_solve(const DesignMatrix& X, const Eigen::VectorXd& Y);

}  // namespace sparselab
