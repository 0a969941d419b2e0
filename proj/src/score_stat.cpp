#include "mlrank/score_stat.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlrank {

namespace {

// Pseudo-inverse of a symmetric PSD matrix; eigenvalues at or below
// rel_tol * max eigenvalue are dropped. Reports whether anything was dropped.
Matrix spectral_pinv(const Matrix& sym, double rel_tol, bool& deficient) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  const Vector& values = eig.eigenvalues();
  const double top = values.cwiseAbs().maxCoeff();
  deficient = false;
  if (!(top > 0.0)) {
    deficient = true;
    return Matrix::Zero(sym.rows(), sym.cols());
  }
  const double cutoff = rel_tol * top;
  Vector inv = Vector::Zero(values.size());
  for (Index i = 0; i < values.size(); ++i) {
    if (values(i) > cutoff) {
      inv(i) = 1.0 / values(i);
    } else {
      deficient = true;
    }
  }
  return eig.eigenvectors() * inv.asDiagonal() * eig.eigenvectors().transpose();
}

}  // namespace

NullModelCache build_null_cache(const Matrix& labels, Index k,
                                const ScoreConfig& cfg) {
  const Index n = labels.rows();
  const Index K = labels.cols();
  if (K < 2) throw std::invalid_argument("need at least two labels");
  if (k < 0 || k >= K) throw std::invalid_argument("label index out of range");

  NullModelCache cache;
  cache.label_index = k;
  cache.collinearity_tol = cfg.collinearity_tol;
  cache.eig_rel_tol = cfg.eig_rel_tol;

  cache.labels_rest.resize(n, K - 1);
  Index c = 0;
  for (Index l = 0; l < K; ++l) {
    if (l == k) continue;
    cache.labels_rest.col(c++) = labels.col(l);
  }
  const Vector response = labels.col(k);
  const bool constant_label = (response.array() == response(0)).all();

  LogisticConfig lcfg = cfg.logistic;
  lcfg.intercept = false;  // the null design is exactly Y_{-k}
  const LogisticFit fit = fit_mle(cache.labels_rest, response, lcfg);

  cache.theta_hat.resize(K);
  cache.theta_hat.head(K - 1) = fit.coefficients;
  cache.theta_hat(K - 1) = 0.0;

  const Vector& p = fit.fitted_probabilities;
  cache.w_diag = p.array() * (1.0 - p.array());
  cache.residuals = response - p;
  cache.weighted_labels = cache.w_diag.asDiagonal() * cache.labels_rest;

  const Matrix a = cache.labels_rest.transpose() * cache.weighted_labels;
  bool deficient = false;
  cache.a_inv = spectral_pinv(a, cfg.eig_rel_tol, deficient);

  const bool cap_hit =
      fit.coefficients.cwiseAbs().maxCoeff() >= lcfg.coef_cap - 1e-6;
  cache.degenerate = constant_label || !fit.converged || cap_hit || deficient;
  return cache;
}

ScoreResult score_univariate(const NullModelCache& cache,
                             const Eigen::Ref<const Vector>& xj) {
  if (xj.size() != cache.residuals.size()) {
    throw std::invalid_argument("feature length must match cached row count");
  }
  if (!xj.allFinite()) throw std::invalid_argument("feature has non-finite entries");

  // A degenerate null fit (boundary probabilities, rank-deficient A) makes the
  // statistic noise at clamp scale; report no evidence instead.
  if (cache.degenerate) return {};

  const double s = xj.dot(cache.residuals);
  const Vector b = cache.weighted_labels.transpose() * xj;
  const double d = (xj.array().square() * cache.w_diag.array()).sum();
  const double v = d - b.dot(cache.a_inv * b);

  ScoreResult res;
  // relative guard: for duplicated label columns the Schur complement only
  // cancels to rounding scale, which grows with d
  if (v <= std::max(cache.collinearity_tol, cache.collinearity_tol * std::abs(d))) {
    res.collinear = true;
    return res;
  }
  res.value = std::abs(s * s / v);
  return res;
}

ScoreResult score_multivariate(const NullModelCache& cache, const Matrix& m) {
  if (m.rows() != cache.residuals.size()) {
    throw std::invalid_argument("added columns must match cached row count");
  }
  if (!m.allFinite()) throw std::invalid_argument("added columns have non-finite entries");

  if (cache.degenerate) return {};

  const Vector s = m.transpose() * cache.residuals;
  const Matrix wm = cache.w_diag.asDiagonal() * m;
  const Matrix b = cache.labels_rest.transpose() * wm;   // (K-1) x m
  const Matrix d = m.transpose() * wm;                   // m x m
  const Matrix v = d - b.transpose() * cache.a_inv * b;

  bool deficient = false;
  const Matrix v_pinv = spectral_pinv(v, cache.eig_rel_tol, deficient);

  ScoreResult res;
  res.value = std::abs(s.dot(v_pinv * s));
  res.collinear = deficient;
  return res;
}

}  // namespace mlrank
