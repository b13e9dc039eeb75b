#pragma once

#include "sparselab/model_core.hpp"

#include <functional>

namespace sparselab::detail {

// Which homogeneous ratio is minimized over which cone.
//   Compatibility: s * D'Sigma D / ||D_S||_1^2   over ||D_Sc||_1 <= L ||D_S||_1
//   Restricted:        D'Sigma D / ||D_S||_2^2   over the same cone
//   Strong:            D'Sigma D / ||D||_2^2     over the same cone
//   Adaptive:          D'Sigma D / ||D_S||_2^2   over ||D_Sc||_1 <= L sqrt(s) ||D_S||_2
enum class ConeKind { Compatibility, Restricted, Strong, Adaptive };

const char* to_string(ConeKind kind);

struct ConeMinimizerOptions {
  double rel_tol = 1e-10;
  long max_iters = 50000;
  long pattern_cap = 1L << 19;  // sign patterns modulo global sign, i.e. |S| <= 20
};

struct ConeMinimum {
  double value = 0.0;
  Eigen::VectorXd witness;  // length p, attains `value` under cone_ratio
  long patterns = 0;
  long iterations = 0;
};

/// The defining ratio evaluated at an arbitrary nonzero vector (no cone check).
double cone_ratio(ConeKind kind, const Eigen::MatrixXd& sigma, const Support& S,
                  const Eigen::VectorXd& delta);

/// Cone membership for the kind's cone, with additive slack.
bool in_cone(ConeKind kind, const Support& S, double L, const Eigen::VectorXd& delta,
             double slack = 1e-9);

/// Minimizes the ratio of `kind` over its cone. Throws RefusalError if the
/// number of sign patterns exceeds the cap.
ConeMinimum minimize_over_cone(ConeKind kind, const Eigen::MatrixXd& sigma, const Support& S,
                               double L, const ConeMinimizerOptions& opts = {});

// Exposed for tests.
Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& w, double radius);
Eigen::VectorXd project_simplex(const Eigen::VectorXd& u);

}  // namespace sparselab::detail
