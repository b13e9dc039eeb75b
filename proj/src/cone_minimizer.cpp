#include "sparselab/detail/cone_minimizer.hpp"

#include "sparselab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace sparselab::detail {

const char* to_string(ConeKind kind) {
  switch (kind) {
    case ConeKind::Compatibility: return "compatibility";
    case ConeKind::Restricted: return "restricted_eigenvalue";
    case ConeKind::Strong: return "strong_restricted_eigenvalue";
    case ConeKind::Adaptive: return "adaptive_restricted_eigenvalue";
  }
  return "unknown";
}

Eigen::VectorXd project_l1_ball(const Eigen::VectorXd& w, double radius) {
  if (w.lpNorm<1>() <= radius) return w;
  if (radius <= 0.0) return Eigen::VectorXd::Zero(w.size());
  std::vector<double> mags(static_cast<std::size_t>(w.size()));
  for (Index i = 0; i < w.size(); ++i) mags[static_cast<std::size_t>(i)] = std::abs(w[i]);
  std::sort(mags.begin(), mags.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < mags.size(); ++k) {
    cumsum += mags[k];
    const double candidate = (cumsum - radius) / static_cast<double>(k + 1);
    if (mags[k] > candidate) theta = candidate;
  }
  Eigen::VectorXd out(w.size());
  for (Index i = 0; i < w.size(); ++i) out[i] = sign(w[i]) * std::max(std::abs(w[i]) - theta, 0.0);
  return out;
}

Eigen::VectorXd project_simplex(const Eigen::VectorXd& u) {
  std::vector<double> sorted(u.data(), u.data() + u.size());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumsum += sorted[k];
    const double candidate = (cumsum - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] > candidate) theta = candidate;
  }
  return (u.array() - theta).max(0.0).matrix();
}

double cone_ratio(ConeKind kind, const Eigen::MatrixXd& sigma, const Support& S,
                  const Eigen::VectorXd& delta) {
  const double q = delta.dot(sigma * delta);
  const double s = static_cast<double>(S.size());
  switch (kind) {
    case ConeKind::Compatibility: {
      const double l1 = l1_norm_on(delta, S);
      return s * q / (l1 * l1);
    }
    case ConeKind::Restricted:
    case ConeKind::Adaptive:
      return q / restrict(delta, S).squaredNorm();
    case ConeKind::Strong:
      return q / delta.squaredNorm();
  }
  return std::numeric_limits<double>::quiet_NaN();
}

bool in_cone(ConeKind kind, const Support& S, double L, const Eigen::VectorXd& delta,
             double slack) {
  const double outside = l1_norm_on(delta, S.complement());
  if (kind == ConeKind::Adaptive) {
    const double s = static_cast<double>(S.size());
    return outside <= L * std::sqrt(s) * restrict(delta, S).norm() + slack;
  }
  return outside <= L * l1_norm_on(delta, S) + slack;
}

namespace {

// One sign pattern's slice in the permuted coordinates x = (D_S, D_Sc).
class Slice {
 public:
  Slice(const Eigen::MatrixXd& sigma, Index s, ConeKind kind, double L, Eigen::VectorXd pattern)
      : sigma_(sigma), s_(s), kind_(kind), pattern_(std::move(pattern)) {
    radius_ = kind == ConeKind::Adaptive ? L * std::sqrt(static_cast<double>(s)) : L;
  }

  Index dim() const { return sigma_.rows(); }

  double value(const Eigen::VectorXd& x, const Eigen::VectorXd& sx) const {
    const double q = x.dot(sx);
    switch (kind_) {
      case ConeKind::Compatibility: return static_cast<double>(s_) * q;
      case ConeKind::Restricted: return q / x.head(s_).squaredNorm();
      case ConeKind::Strong: return q / x.squaredNorm();
      case ConeKind::Adaptive: return q;
    }
    return 0.0;
  }

  Eigen::VectorXd gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& sx) const {
    const double q = x.dot(sx);
    switch (kind_) {
      case ConeKind::Compatibility: return 2.0 * static_cast<double>(s_) * sx;
      case ConeKind::Adaptive: return 2.0 * sx;
      case ConeKind::Restricted: {
        const double d = x.head(s_).squaredNorm();
        Eigen::VectorXd g = (2.0 / d) * sx;
        g.head(s_) -= (2.0 * q / (d * d)) * x.head(s_);
        return g;
      }
      case ConeKind::Strong: {
        const double d = x.squaredNorm();
        return (2.0 / d) * sx - (2.0 * q / (d * d)) * x;
      }
    }
    return sx;
  }

  Eigen::VectorXd project(const Eigen::VectorXd& x) const {
    Eigen::VectorXd out(x.size());
    if (kind_ == ConeKind::Adaptive) {
      const double nv = x.head(s_).norm();
      if (nv > 0.0) {
        out.head(s_) = x.head(s_) / nv;
      } else {
        out.head(s_) = pattern_ / std::sqrt(static_cast<double>(s_));
      }
    } else {
      const Eigen::VectorXd u = pattern_.cwiseProduct(x.head(s_));
      out.head(s_) = pattern_.cwiseProduct(project_simplex(u));
    }
    out.tail(x.size() - s_) = project_l1_ball(x.tail(x.size() - s_), radius_);
    return out;
  }

  const Eigen::MatrixXd& sigma() const { return sigma_; }

 private:
  const Eigen::MatrixXd& sigma_;
  Index s_;
  ConeKind kind_;
  Eigen::VectorXd pattern_;
  double radius_ = 0.0;
};

struct RunResult {
  Eigen::VectorXd x;
  double value = std::numeric_limits<double>::infinity();
  long iterations = 0;
};

// Accelerated projected gradient with backtracking and monotone restarts.
RunResult run_projected_gradient(const Slice& slice, const Eigen::VectorXd& start, double step0,
                                 const ConeMinimizerOptions& opts) {
  const auto& sigma = slice.sigma();
  RunResult res;
  Eigen::VectorXd x = slice.project(start);
  Eigen::VectorXd sx = sigma * x;
  double f = slice.value(x, sx);
  Eigen::VectorXd x_prev = x;
  double t = step0;
  long momentum = 0;
  int quiet = 0;

  long it = 0;
  for (; it < opts.max_iters; ++it) {
    Eigen::VectorXd y = x;
    if (momentum > 0) {
      const double beta = static_cast<double>(momentum - 1) / static_cast<double>(momentum + 2);
      y = slice.project(x + beta * (x - x_prev));
    }
    const Eigen::VectorXd sy = sigma * y;
    const double fy = slice.value(y, sy);
    const Eigen::VectorXd gy = slice.gradient(y, sy);

    Eigen::VectorXd z;
    Eigen::VectorXd sz;
    double fz = 0.0;
    bool accepted = false;
    for (int bt = 0; bt < 80; ++bt) {
      z = slice.project(y - t * gy);
      sz = sigma * z;
      fz = slice.value(z, sz);
      const Eigen::VectorXd d = z - y;
      if (fz <= fy + gy.dot(d) + d.squaredNorm() / (2.0 * t) + 1e-15 * std::abs(fy)) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted || !(fz <= f)) {
      if (momentum > 0) {
        momentum = 0;
        continue;
      }
      break;
    }

    const double change = f - fz;
    x_prev = std::move(x);
    x = std::move(z);
    sx = std::move(sz);
    f = fz;
    ++momentum;
    t *= 1.25;

    if (change <= opts.rel_tol * std::max(std::abs(f), std::numeric_limits<double>::min())) {
      if (++quiet >= 3) break;
    } else {
      quiet = 0;
    }
    if (f <= 0.0) break;
  }
  res.x = std::move(x);
  res.value = f;
  res.iterations = it;
  return res;
}

double spectral_norm_bound(const Eigen::MatrixXd& sigma) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma, Eigen::EigenvaluesOnly);
  return std::max(es.eigenvalues().cwiseAbs().maxCoeff(), 1e-12);
}

}  // namespace

ConeMinimum minimize_over_cone(ConeKind kind, const Eigen::MatrixXd& sigma, const Support& S,
                               double L, const ConeMinimizerOptions& opts) {
  const Index p = sigma.rows();
  const Index s = S.size();
  if (sigma.cols() != p || S.ambient_dim() != p) {
    throw ArgumentError("cone minimizer: dimension mismatch");
  }
  if (s == 0 || s == p) throw ArgumentError("cone minimizer: support must be nonempty and proper");
  if (!(L > 0.0)) throw ArgumentError("cone minimizer: L must be positive");
  if (s > 62 || (1L << (s - 1)) > opts.pattern_cap) {
    throw RefusalError("cone minimizer: 2^" + std::to_string(s - 1) +
                       " sign patterns exceed the enumeration cap");
  }

  std::vector<Index> order = S.indices();
  const Support Sc = S.complement();
  order.insert(order.end(), Sc.indices().begin(), Sc.indices().end());
  const Eigen::MatrixXd perm = sigma(order, order);

  const double lip = spectral_norm_bound(perm);
  const double sd = static_cast<double>(s);
  const double step0 = 1.0 / (2.0 * lip * (kind == ConeKind::Compatibility ? sd : sd * sd));

  // Smallest eigenvector of the permuted Gram, used as an extra start.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(perm);
  const Eigen::VectorXd umin = es.eigenvectors().col(0);

  ConeMinimum best;
  best.value = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_x;

  const long patterns = 1L << (s - 1);
  for (long code = 0; code < patterns; ++code) {
    Eigen::VectorXd pattern(s);
    pattern[0] = 1.0;
    for (Index k = 1; k < s; ++k) pattern[k] = ((code >> (k - 1)) & 1L) ? -1.0 : 1.0;

    Eigen::VectorXd base = Eigen::VectorXd::Zero(p);
    base.head(s) = pattern / sd;

    std::vector<RunResult> candidates;
    auto consider = [&](const RunResult& r) {
      best.iterations += r.iterations;
      candidates.push_back(r);
    };

    const Slice compat(perm, s, ConeKind::Compatibility, L, pattern);
    const RunResult rc = run_projected_gradient(compat, base, step0, opts);
    consider(rc);

    if (kind != ConeKind::Compatibility) {
      // Eigen-direction start, signed to agree with the pattern.
      Eigen::VectorXd eig_start = umin;
      const double align = pattern.dot(eig_start.head(s));
      if (align != 0.0) eig_start /= align;

      const Slice restricted(perm, s, ConeKind::Restricted, L, pattern);
      RunResult rr = run_projected_gradient(restricted, rc.x, step0, opts);
      best.iterations += rr.iterations;
      for (const auto& start : {base, eig_start}) {
        RunResult alt = run_projected_gradient(restricted, start, step0, opts);
        best.iterations += alt.iterations;
        if (alt.value < rr.value) rr = std::move(alt);
      }

      if (kind == ConeKind::Restricted) {
        candidates.push_back(rr);
      } else if (kind == ConeKind::Strong) {
        const Slice strong(perm, s, ConeKind::Strong, L, pattern);
        for (const auto& start : {rr.x, rc.x, eig_start}) {
          consider(run_projected_gradient(strong, start, step0, opts));
        }
      } else {
        const Slice adaptive(perm, s, ConeKind::Adaptive, L, pattern);
        // Rescale to ||D_S||_2 = 1 so the l1-cone points stay feasible.
        for (const auto& start : {rr.x, rc.x, base, eig_start}) {
          const double nv = start.head(s).norm();
          if (nv == 0.0) continue;
          consider(run_projected_gradient(adaptive, start / nv, step0, opts));
        }
      }
    }

    for (const auto& r : candidates) {
      // Re-evaluate through the defining ratio so the reported value is
      // exactly what the witness attains.
      Eigen::VectorXd full = Eigen::VectorXd::Zero(p);
      for (Index k = 0; k < p; ++k) full[order[static_cast<std::size_t>(k)]] = r.x[k];
      const double v = cone_ratio(kind, sigma, S, full);
      if (v < best.value) {
        best.value = v;
        best_x = std::move(full);
      }
    }
  }
  best.patterns = patterns;
  best.witness = std::move(best_x);
  return best;
}

}  // namespace sparselab::detail
