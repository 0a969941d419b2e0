#pragma once

#include "mlrank/logistic.hpp"
#include "mlrank/types.hpp"

namespace mlrank {

struct ScoreConfig {
  LogisticConfig logistic;       // no intercept: the null model is y_k ~ y_{-k}
  double collinearity_tol = 1e-12;
  double eig_rel_tol = 1e-10;    // spectral pseudo-inverse cutoff, relative to the top eigenvalue
};

// Everything the score statistic needs that does not involve the candidate
// feature; built once per label and shared (immutable) across all features.
struct NullModelCache {
  Index label_index = 0;
  Vector theta_hat;        // K entries: fitted betas plus a trailing 0 for the candidate slot
  Matrix labels_rest;      // n x (K-1)
  Vector w_diag;           // p(1-p), entries in (0, 0.25]
  Matrix a_inv;            // inverse (or pseudo-inverse) of labels_rest' W labels_rest
  Vector residuals;        // y_k - p
  Matrix weighted_labels;  // W * labels_rest, cached so each feature costs O(nK)
  bool degenerate = false; // separation-capped fit, constant label, or rank-deficient A
  double collinearity_tol = 1e-12;
  double eig_rel_tol = 1e-10;
};

NullModelCache build_null_cache(const Matrix& labels, Index k,
                                const ScoreConfig& cfg = {});

struct ScoreResult {
  double value = 0.0;
  bool collinear = false;
  Vector components;  // per-term breakdown where a caller assembles one; empty otherwise
};

// u = |s^2 / v| with s = xj'(y_k - p), v = D - C A^{-1} B. A near-zero v
// means xj is numerically in the span of the other labels; the score is
// reported as 0 with the collinear flag rather than exploding.
ScoreResult score_univariate(const NullModelCache& cache,
                             const Eigen::Ref<const Vector>& xj);

// U = |S' V^{-1} S| over an n x m block of added columns, with V inverted
// through an eigenvalue-thresholded pseudo-inverse.
ScoreResult score_multivariate(const NullModelCache& cache, const Matrix& m);

}  // namespace mlrank
