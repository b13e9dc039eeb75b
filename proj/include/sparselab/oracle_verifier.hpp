#pragma once

#include "sparselab/condition_lab.hpp"
#include "sparselab/lasso_solver.hpp"
#include "sparselab/model_core.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sparselab {

/// Gaussian noise eps ~ N(0, sigma^2 I). sigma = 0 gives the noiseless path.
struct NoiseModel {
  double sigma = 1.0;
  std::uint64_t seed = 0;

  NoiseModel() = default;
  NoiseModel(double sd, std::uint64_t sd_seed);
};

/// lambda = c * lambda_universal(sigma, n, p, tau); the cone opening is
/// L = (c + 1) / (c - 1).
struct LambdaRule {
  double c = 2.0;
  double tau = 2.5;

  LambdaRule() = default;
  LambdaRule(double multiplier, double tail_exponent);
};

struct BoundReport {
  std::string bound_name;
  double theoretical = 0.0;
  double empirical = 0.0;
  bool holds = false;
  bool applicable = true;
  bool on_good_event = true;
  double lambda_used = 0.0;
  double phi_used = 0.0;
  std::map<std::string, double> meta;
};

inline constexpr double kBoundSlack = 1e-9;

/// 2 sigma sqrt(tau log p / n): high-probability level of 2||eps'X/n||_inf.
double lambda_universal(double sigma, Index n, Index p, double tau);

/// L = (c + 1) / (c - 1).
double cone_parameter(double c);

/// 2 max_j |x_j' eps| / n.
double stochastic_term(const DesignMatrix& X, const Eigen::VectorXd& eps);

/// ||X(bh - b0)||^2/n + lambda||bh||_1 <= 2 eps'X(bh - b0)/n + lambda||b0||_1 + 1e-9,
/// with eps = Y - X b0.
bool basic_inequality_check(const DesignMatrix& X, const Eigen::VectorXd& Y,
                            const CoefVector& beta_hat, const CoefVector& beta0, double lambda);

/// ||D_Sc||_1 <= L ||D_S||_1 + 1e-9.
bool cone_membership(const Eigen::VectorXd& delta, const Support& S, double L);

struct Losses {
  double pred = 0.0;
  double l1 = 0.0;
  double l2sq = 0.0;
  int selection = 0;
};

Losses losses(const DesignMatrix& X, const CoefVector& beta_hat, const CoefVector& beta0,
              double support_tol = kDefaultSupportTol);

/// The four Table-1 rows (slow, fast, l1, l2) for the noiseless or noisy
/// column; `empirical` is left at zero and `holds` unset.
std::vector<BoundReport> table1_bounds(double lambda, Index s, double phi_comp_sq,
                                       double phi_str_sq, double beta0_l1, bool noisy);

/// Design constants needed by verify_bounds, computed once per (X, S, L).
struct DesignConstants {
  double phi_comp_sq = 0.0;
  double phi_str_sq = 0.0;
  ConditionReport compatibility;
  ConditionReport strong_re;
};

DesignConstants design_constants(const DesignMatrix& X, const ConeSpec& cone,
                                 const ConditionOptions& opts = {});

struct VerifyOptions {
  std::optional<double> lambda;  // required when noise.sigma == 0
  SolverOptions solver{};
  ConditionOptions conditions{};
  std::optional<DesignConstants> constants;  // reuse across replications
  std::optional<Eigen::VectorXd> eps;        // overrides the drawn noise
};

struct VerifyResult {
  std::vector<BoundReport> bounds;
  Losses loss;
  LassoSolution solution;
  double lambda = 0.0;
  double stochastic = 0.0;
  bool noisy = false;
  bool good_event = true;
  bool cone_ok = false;
  bool basic_inequality_ok = false;
  bool l1_ratio_ok = false;  // ||bh||_1 <= ||b0||_1 (noiseless) or 3||b0||_1 (noisy)
};

/// Draws eps (unless supplied), forms Y, solves, and checks every Table-1
/// bound. Noisy when noise.sigma > 0; lambda then defaults to
/// rule.c * lambda_universal. Throws ConvergenceError if the solver does not
/// converge.
VerifyResult verify_bounds(const DesignMatrix& X, const CoefVector& beta0, const NoiseModel& noise,
                           const LambdaRule& rule, const ConeSpec& cone,
                           const VerifyOptions& opts = {});

struct RecoveryCheck {
  bool subset_of_S = false;
  double linf_bound = 0.0;
  bool linf_ok = false;
  double betamin_threshold = 0.0;
  double linf_error = 0.0;
  Support selected;
};

/// Noiseless variable-selection check against the irrepresentable-based
/// guarantees. S = supp(beta0); Sigma11 must be invertible.
RecoveryCheck support_recovery_check(const DesignMatrix& X, const CoefVector& beta0, double lambda,
                                     const SolverOptions& opts = {});

struct OlsCheck {
  double empirical_mean = 0.0;
  double theoretical = 0.0;
};

/// Monte Carlo mean of (1/n)||X(b_ols - b0)||^2 against sigma^2 p / n.
OlsCheck ols_prediction_check(Index p, Index n, double sigma, long reps, std::uint64_t seed);

}  // namespace sparselab
