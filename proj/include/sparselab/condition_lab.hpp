#pragma once

#include "sparselab/detail/cone_minimizer.hpp"
#include "sparselab/model_core.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sparselab {

/// Cone C(S, L) = { D : ||D_Sc||_1 <= L ||D_S||_1 }, S nonempty and proper.
struct ConeSpec {
  Support S;
  double L;

  ConeSpec(Support support, double opening);
};

struct ConditionReport {
  std::string name;
  double value = 0.0;
  bool satisfied = false;
  std::optional<Eigen::VectorXd> witness;
  std::vector<Index> witness_indices;  // attaining subset or pair, zero-based
  std::map<std::string, double> meta;
};

struct ConditionOptions {
  long subset_cap = 100000;
  detail::ConeMinimizerOptions cone{};
};

/// Threshold below which a cone constant counts as degenerate.
inline constexpr double kDegenerateCone = 1e-10;

/// max_{i != j} |Sigma_ij|. Columns must have unit mean-square norm (within
/// 1e-8); otherwise PreconditionError names the first offending column.
ConditionReport mutual_incoherence(const DesignMatrix& X);

/// delta_s over all size-s column subsets. Satisfied iff delta_s < 1.
ConditionReport rip_constant(const DesignMatrix& X, Index s, long subset_cap = 100000);
ConditionReport rip_constant(const GramMatrix& sigma, Index s, long subset_cap = 100000);

/// Restricted null space property: null(X) meets C(S, L) only at zero.
/// value = min over kernel vectors of ||v_Sc||_1 / ||v_S||_1 (+inf when no
/// kernel vector touches S); satisfied iff value > L.
ConditionReport restricted_nullspace_holds(const DesignMatrix& X, const Support& S, double L,
                                           long subset_cap = 100000);

/// s-scaled compatibility constant: min (s/n)||X D||^2 over ||D_S||_1 = 1,
/// ||D_Sc||_1 <= L.
ConditionReport compatibility_constant(const DesignMatrix& X, const ConeSpec& cone,
                                       const ConditionOptions& opts = {});
ConditionReport compatibility_constant(const GramMatrix& sigma, const ConeSpec& cone,
                                       const ConditionOptions& opts = {});

// Restricted eigenvalue variants. The `_at` forms fix S; the others minimize
// over every size-s support (capped by subset_cap).
ConditionReport restricted_eigenvalue_at(const GramMatrix& sigma, const ConeSpec& cone,
                                         const ConditionOptions& opts = {});
ConditionReport restricted_eigenvalue(const DesignMatrix& X, Index s, double L,
                                      const ConditionOptions& opts = {});

ConditionReport adaptive_restricted_eigenvalue_at(const GramMatrix& sigma, const ConeSpec& cone,
                                                  const ConditionOptions& opts = {});
ConditionReport adaptive_restricted_eigenvalue(const DesignMatrix& X, Index s, double L,
                                               const ConditionOptions& opts = {});

ConditionReport strong_restricted_eigenvalue_at(const GramMatrix& sigma, const ConeSpec& cone,
                                                const ConditionOptions& opts = {});
ConditionReport strong_restricted_eigenvalue(const DesignMatrix& X, Index s, double L,
                                             const ConditionOptions& opts = {});

/// ||Sigma21 Sigma11^{-1} tau_S||_inf; satisfied iff <= 1.
ConditionReport weak_irrepresentable(const GramMatrix& sigma, const Support& S,
                                     const Eigen::VectorXd& tau_S);

/// theta = max over ||tau||_inf <= 1 of ||Sigma21 Sigma11^{-1} tau||_inf,
/// i.e. the largest row l1-norm of Sigma21 Sigma11^{-1}; satisfied iff < 1.
ConditionReport uniform_irrepresentable(const GramMatrix& sigma, const Support& S);

/// |beta0|_min against 4 lambda s0 / phi_comp^2.
ConditionReport beta_min_check(const CoefVector& beta0, double lambda, const Support& S0,
                               double phi_comp_sq);

/// Three sufficient-condition routes: RIP (delta_2s < 1/3), MIP (M < 1/(3s)),
/// and uniform IR implying compatibility with the (1 - L theta)^2
/// Lambda_min(Sigma11)^2 lower bound. `S` defaults to the first s columns.
std::vector<ConditionReport> implication_checks(const DesignMatrix& X, Index s, double L,
                                                const std::optional<Support>& S = std::nullopt,
                                                const ConditionOptions& opts = {});

// Shared helpers.
double binomial(Index n, Index k);

/// Visits every size-k subset of {0..n-1} in lexicographic order.
template <typename Fn>
void for_each_subset(Index n, Index k, Fn&& fn) {
  std::vector<Index> idx(static_cast<std::size_t>(k));
  for (Index i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  if (k > n) return;
  while (true) {
    fn(static_cast<const std::vector<Index>&>(idx));
    Index i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (Index j = i + 1; j < k; ++j) {
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

}  // namespace sparselab
