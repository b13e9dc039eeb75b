#include "sparselab/condition_lab.hpp"

#include "sparselab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sparselab {

using detail::ConeKind;

ConeSpec::ConeSpec(Support support, double opening) : S(std::move(support)), L(opening) {
  if (!(L > 0.0) || !std::isfinite(L)) throw ArgumentError("cone opening L must be positive");
  if (S.empty() || S.size() == S.ambient_dim()) {
    throw ArgumentError("cone support must be nonempty and proper");
  }
}

double binomial(Index n, Index k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double out = 1.0;
  for (Index i = 1; i <= k; ++i) {
    out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(out);
}

namespace {

std::string subset_label(const std::vector<Index>& idx) {
  std::ostringstream os;
  os << '{';
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (k) os << ',';
    os << idx[k] + 1;
  }
  os << '}';
  return os.str();
}

void check_subset_count(Index p, Index s, long cap, const char* what) {
  const double count = binomial(p, s);
  if (count > static_cast<double>(cap)) {
    std::ostringstream os;
    os << what << ": C(" << p << ", " << s << ") = " << count << " subsets exceed the cap of "
       << cap;
    throw RefusalError(os.str());
  }
}

double lambda_min_of(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

void require_invertible_active_block(const PartitionedGram& part, double& lambda_min_out) {
  lambda_min_out = lambda_min_of(part.sigma11);
  if (!(lambda_min_out > 1e-10)) {
    throw PreconditionError(
        "Sigma11 is singular (Lambda_min(Sigma11) = " + std::to_string(lambda_min_out) +
        "); the active block must satisfy Lambda_min(Sigma11) > 0");
  }
}

ConditionReport cone_report(ConeKind kind, const GramMatrix& sigma, const ConeSpec& cone,
                            const ConditionOptions& opts) {
  if (cone.S.ambient_dim() != sigma.dim()) throw ArgumentError("cone support dimension mismatch");
  const auto res = detail::minimize_over_cone(kind, sigma.matrix(), cone.S, cone.L, opts.cone);
  ConditionReport rep;
  rep.name = detail::to_string(kind);
  rep.value = res.value;
  rep.satisfied = res.value > kDegenerateCone;
  rep.witness = res.witness;
  rep.witness_indices = cone.S.indices();
  rep.meta["L"] = cone.L;
  rep.meta["s"] = static_cast<double>(cone.S.size());
  rep.meta["sign_patterns"] = static_cast<double>(res.patterns);
  rep.meta["iterations"] = static_cast<double>(res.iterations);
  if (kind == ConeKind::Compatibility) {
    // Reported constant carries the factor s (the printed ratio omits it).
    rep.meta["s_scaled"] = 1.0;
  }
  return rep;
}

ConditionReport all_subsets_report(ConeKind kind, const DesignMatrix& X, Index s, double L,
                                   const ConditionOptions& opts) {
  const Index p = X.cols();
  if (s < 1 || s >= p) throw ArgumentError("support size must satisfy 1 <= s < p");
  check_subset_count(p, s, opts.subset_cap, detail::to_string(kind));
  const GramMatrix sigma = gram(X);
  ConditionReport best;
  best.value = std::numeric_limits<double>::infinity();
  long subsets = 0;
  for_each_subset(p, s, [&](const std::vector<Index>& idx) {
    ++subsets;
    ConditionReport rep = cone_report(kind, sigma, ConeSpec(Support(idx, p), L), opts);
    if (rep.value < best.value) best = std::move(rep);
  });
  best.meta["subsets"] = static_cast<double>(subsets);
  return best;
}

}  // namespace

ConditionReport mutual_incoherence(const DesignMatrix& X) {
  const GramMatrix sigma = gram(X);
  const Index p = sigma.dim();
  for (Index j = 0; j < p; ++j) {
    if (std::abs(sigma(j, j) - 1.0) > 1e-8) {
      throw PreconditionError("mutual_incoherence: column " + std::to_string(j + 1) +
                              " has mean-square norm " + std::to_string(sigma(j, j)) +
                              " (columns must be centered and scaled to 1)");
    }
  }
  ConditionReport rep;
  rep.name = "mutual_incoherence";
  rep.value = 0.0;
  for (Index i = 0; i < p; ++i) {
    for (Index j = i + 1; j < p; ++j) {
      const double c = std::abs(sigma(i, j));
      if (c > rep.value || rep.witness_indices.empty()) {
        rep.value = std::max(rep.value, c);
        rep.witness_indices = {i, j};
      }
    }
  }
  rep.satisfied = rep.value < 1.0;
  return rep;
}

ConditionReport rip_constant(const GramMatrix& sigma, Index s, long subset_cap) {
  const Index p = sigma.dim();
  if (s < 1 || s > p) throw ArgumentError("rip_constant: order must satisfy 1 <= s <= p");
  check_subset_count(p, s, subset_cap, "rip_constant");

  ConditionReport rep;
  rep.name = "rip_constant";
  rep.value = -std::numeric_limits<double>::infinity();
  double overall_min = std::numeric_limits<double>::infinity();
  double overall_max = -std::numeric_limits<double>::infinity();
  for_each_subset(p, s, [&](const std::vector<Index>& idx) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma.matrix()(idx, idx),
                                                      Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues()[0];
    const double hi = es.eigenvalues()[s - 1];
    const std::string label = subset_label(idx);
    rep.meta[label + ".lambda_min"] = lo;
    rep.meta[label + ".lambda_max"] = hi;
    overall_min = std::min(overall_min, lo);
    overall_max = std::max(overall_max, hi);
    const double delta = std::max(hi - 1.0, 1.0 - lo);
    if (delta > rep.value) {
      rep.value = delta;
      rep.witness_indices = idx;
    }
  });
  rep.meta["order"] = static_cast<double>(s);
  rep.meta["lambda_min"] = overall_min;
  rep.meta["lambda_max"] = overall_max;
  rep.satisfied = rep.value < 1.0;
  return rep;
}

ConditionReport rip_constant(const DesignMatrix& X, Index s, long subset_cap) {
  return rip_constant(gram(X), s, subset_cap);
}

ConditionReport restricted_nullspace_holds(const DesignMatrix& X, const Support& S, double L,
                                           long subset_cap) {
  const Index p = X.cols();
  if (S.ambient_dim() != p) throw ArgumentError("support dimension mismatch");
  if (S.empty() || S.size() == p) throw ArgumentError("support must be nonempty and proper");
  if (!(L > 0.0)) throw ArgumentError("L must be positive");
  if (S.size() > 20) throw RefusalError("restricted_nullspace_holds: |S| > 20 sign patterns");

  ConditionReport rep;
  rep.name = "restricted_nullspace";
  rep.meta["L"] = L;

  const Eigen::MatrixXd kernel = null_space_basis(X);
  const Index k = kernel.cols();
  rep.meta["kernel_dim"] = static_cast<double>(k);
  rep.value = std::numeric_limits<double>::infinity();
  if (k == 0) {
    rep.satisfied = true;
    return rep;
  }

  const Support Sc = S.complement();
  const Eigen::MatrixXd on_s = kernel(S.indices(), Eigen::all);
  const Eigen::MatrixXd off_s = kernel(Sc.indices(), Eigen::all);
  const Index s = S.size();
  const Index m = Sc.size();

  // For a sign pattern sigma, solve  min ||A c||_1  s.t.  b'c = 1  with
  // A = off_s, b = on_s' sigma. The optimum of this LP sits on a vertex of the
  // hyperplane arrangement {a_i'c = 0} once the lineality space is removed.
  Eigen::VectorXd best_c;
  Eigen::MatrixXd best_basis;
  const long patterns = 1L << (s - 1);
  for (long code = 0; code < patterns; ++code) {
    Eigen::VectorXd sigma(s);
    sigma[0] = 1.0;
    for (Index i = 1; i < s; ++i) sigma[i] = ((code >> (i - 1)) & 1L) ? -1.0 : 1.0;
    const Eigen::VectorXd b = on_s.transpose() * sigma;
    if (b.norm() <= 1e-12) continue;

    Eigen::MatrixXd stacked(m + 1, k);
    stacked.topRows(m) = off_s;
    stacked.row(m) = b.transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeFullV);
    const double tol = 1e-10 * std::max(1.0, svd.singularValues()[0]);
    Index rank = 0;
    while (rank < svd.singularValues().size() && svd.singularValues()[rank] > tol) ++rank;
    const Eigen::MatrixXd basis = svd.matrixV().leftCols(rank);
    const Eigen::MatrixXd a = off_s * basis;
    const Eigen::VectorXd bb = basis.transpose() * b;

    const Index pick = rank - 1;
    check_subset_count(m, pick, subset_cap, "restricted_nullspace_holds");
    for_each_subset(m, pick, [&](const std::vector<Index>& rows) {
      Eigen::MatrixXd sys(rank, rank);
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rank);
      for (Index r = 0; r < pick; ++r) sys.row(r) = a.row(rows[static_cast<std::size_t>(r)]);
      sys.row(pick) = bb.transpose();
      rhs[pick] = 1.0;
      Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
      lu.setThreshold(1e-12);
      if (!lu.isInvertible()) return;
      const Eigen::VectorXd c = lu.solve(rhs);
      const double val = (a * c).lpNorm<1>();
      if (val < rep.value) {
        rep.value = val;
        best_c = c;
        best_basis = basis;
      }
    });
  }

  rep.satisfied = rep.value > L;
  if (best_c.size() > 0) {
    Eigen::VectorXd v = kernel * (best_basis * best_c);
    v /= v.norm();
    if (!rep.satisfied) rep.witness = v;
    rep.meta["ratio_witness_l1_off_over_on"] = rep.value;
  }
  return rep;
}

ConditionReport compatibility_constant(const GramMatrix& sigma, const ConeSpec& cone,
                                       const ConditionOptions& opts) {
  if (cone.S.size() > 20) throw RefusalError("compatibility_constant: |S| > 20");
  return cone_report(ConeKind::Compatibility, sigma, cone, opts);
}

ConditionReport compatibility_constant(const DesignMatrix& X, const ConeSpec& cone,
                                       const ConditionOptions& opts) {
  return compatibility_constant(gram(X), cone, opts);
}

ConditionReport restricted_eigenvalue_at(const GramMatrix& sigma, const ConeSpec& cone,
                                         const ConditionOptions& opts) {
  return cone_report(ConeKind::Restricted, sigma, cone, opts);
}

ConditionReport restricted_eigenvalue(const DesignMatrix& X, Index s, double L,
                                      const ConditionOptions& opts) {
  return all_subsets_report(ConeKind::Restricted, X, s, L, opts);
}

ConditionReport adaptive_restricted_eigenvalue_at(const GramMatrix& sigma, const ConeSpec& cone,
                                                  const ConditionOptions& opts) {
  return cone_report(ConeKind::Adaptive, sigma, cone, opts);
}

ConditionReport adaptive_restricted_eigenvalue(const DesignMatrix& X, Index s, double L,
                                               const ConditionOptions& opts) {
  return all_subsets_report(ConeKind::Adaptive, X, s, L, opts);
}

ConditionReport strong_restricted_eigenvalue_at(const GramMatrix& sigma, const ConeSpec& cone,
                                                const ConditionOptions& opts) {
  return cone_report(ConeKind::Strong, sigma, cone, opts);
}

ConditionReport strong_restricted_eigenvalue(const DesignMatrix& X, Index s, double L,
                                             const ConditionOptions& opts) {
  return all_subsets_report(ConeKind::Strong, X, s, L, opts);
}

ConditionReport weak_irrepresentable(const GramMatrix& sigma, const Support& S,
                                     const Eigen::VectorXd& tau_S) {
  const PartitionedGram part = partition_gram(sigma, S);
  if (tau_S.size() != S.size()) throw ArgumentError("tau_S length must equal |S|");
  if (tau_S.cwiseAbs().maxCoeff() > 1.0) throw ArgumentError("tau_S must satisfy ||tau||_inf <= 1");
  double lmin = 0.0;
  require_invertible_active_block(part, lmin);

  const Eigen::VectorXd z = part.sigma11.llt().solve(tau_S);
  const Eigen::VectorXd image = part.sigma21 * z;

  ConditionReport rep;
  rep.name = "weak_irrepresentable";
  rep.value = image.cwiseAbs().maxCoeff();
  rep.satisfied = rep.value <= 1.0;
  rep.meta["strict"] = rep.value < 1.0 ? 1.0 : 0.0;
  rep.meta["lambda_min_sigma11"] = lmin;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(sigma.dim());
  for (Index k = 0; k < S.size(); ++k) w[S[k]] = tau_S[k];
  rep.witness = w;
  return rep;
}

ConditionReport uniform_irrepresentable(const GramMatrix& sigma, const Support& S) {
  const PartitionedGram part = partition_gram(sigma, S);
  double lmin = 0.0;
  require_invertible_active_block(part, lmin);

  // Rows of Sigma21 Sigma11^{-1}; the max over sign vectors of |row . tau|
  // is the row's l1-norm.
  const Eigen::MatrixXd m = part.sigma11.llt().solve(part.sigma12).transpose();
  Index row = 0;
  const double theta = m.rowwise().lpNorm<1>().maxCoeff(&row);

  ConditionReport rep;
  rep.name = "uniform_irrepresentable";
  rep.value = theta;
  rep.satisfied = theta < 1.0;
  rep.meta["lambda_min_sigma11"] = lmin;
  Eigen::VectorXd w = Eigen::VectorXd::Zero(sigma.dim());
  for (Index k = 0; k < S.size(); ++k) w[S[k]] = m(row, k) < 0.0 ? -1.0 : 1.0;
  rep.witness = w;
  rep.witness_indices = {part.inactive[row]};
  return rep;
}

ConditionReport beta_min_check(const CoefVector& beta0, double lambda, const Support& S0,
                               double phi_comp_sq) {
  if (S0.empty()) throw ArgumentError("beta_min_check: active set is empty");
  if (!(phi_comp_sq > 0.0)) throw ArgumentError("beta_min_check: phi_comp^2 must be positive");
  if (S0.ambient_dim() != beta0.size()) throw ArgumentError("beta_min_check: dimension mismatch");
  double bmin = std::numeric_limits<double>::infinity();
  for (Index j : S0.indices()) bmin = std::min(bmin, std::abs(beta0[j]));
  const double threshold = 4.0 * lambda * static_cast<double>(S0.size()) / phi_comp_sq;

  ConditionReport rep;
  rep.name = "beta_min";
  rep.value = bmin;
  rep.satisfied = bmin >= threshold;
  rep.meta["threshold"] = threshold;
  rep.meta["lambda"] = lambda;
  rep.meta["s0"] = static_cast<double>(S0.size());
  rep.meta["phi_comp_sq"] = phi_comp_sq;
  return rep;
}

std::vector<ConditionReport> implication_checks(const DesignMatrix& X, Index s, double L,
                                                const std::optional<Support>& S,
                                                const ConditionOptions& opts) {
  const Index p = X.cols();
  if (s < 1 || s >= p) throw ArgumentError("implication_checks: need 1 <= s < p");
  const GramMatrix sigma = gram(X);
  std::vector<ConditionReport> out;

  const Index order = std::min<Index>(2 * s, p);
  ConditionReport rip = rip_constant(sigma, order, opts.subset_cap);
  ConditionReport rip_route;
  rip_route.name = "rip_route";
  rip_route.value = rip.value;
  rip_route.satisfied = rip.value < 1.0 / 3.0;
  rip_route.witness_indices = rip.witness_indices;
  rip_route.meta["order"] = static_cast<double>(order);
  rip_route.meta["threshold"] = 1.0 / 3.0;
  out.push_back(std::move(rip_route));

  ConditionReport mip = mutual_incoherence(X);
  ConditionReport mip_route;
  mip_route.name = "mip_route";
  mip_route.value = mip.value;
  mip_route.satisfied = mip.value < 1.0 / (3.0 * static_cast<double>(s));
  mip_route.witness_indices = mip.witness_indices;
  mip_route.meta["threshold"] = 1.0 / (3.0 * static_cast<double>(s));
  out.push_back(std::move(mip_route));

  const Support active = S ? *S : Support::first(s, p);
  const ConditionReport ir = uniform_irrepresentable(sigma, active);
  ConditionReport ir_route;
  ir_route.name = "ir_route";
  ir_route.meta["theta"] = ir.value;
  ir_route.meta["L"] = L;
  const double lmin = ir.meta.at("lambda_min_sigma11");
  ir_route.meta["lambda_min_sigma11"] = lmin;
  if (ir.value < 1.0 / L) {
    const double bound = std::pow(1.0 - L * ir.value, 2) * lmin * lmin;
    const ConditionReport comp = compatibility_constant(sigma, ConeSpec(active, L), opts);
    ir_route.value = bound;
    ir_route.satisfied = comp.value >= bound - 1e-8;
    ir_route.witness = comp.witness;
    ir_route.meta["applicable"] = 1.0;
    ir_route.meta["phi_comp_sq"] = comp.value;
  } else {
    ir_route.value = 0.0;
    ir_route.satisfied = false;
    ir_route.meta["applicable"] = 0.0;
  }
  ir_route.witness_indices = active.indices();
  out.push_back(std::move(ir_route));
  return out;
}

}  // namespace sparselab
