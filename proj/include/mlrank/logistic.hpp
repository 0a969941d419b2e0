#pragma once

#include "mlrank/types.hpp"

namespace mlrank {

struct LogisticConfig {
  double tol = 1e-8;       // gradient max-norm at convergence
  int max_iter = 100;
  double ridge = 1e-8;     // keeps the optimum finite under separation
  double coef_cap = 30.0;  // hard cap on |theta_j|
  bool intercept = false;  // appends an unpenalized intercept as the last coefficient
};

struct LogisticFit {
  Vector coefficients;  // design columns, intercept last when enabled
  bool converged = false;
  int iterations = 0;
  double final_log_likelihood = 0.0;  // unpenalized
  Vector fitted_probabilities;        // clamped into (0,1)
};

// Maximizes l(theta) = sum_i [y_i z_i'theta - log(1+exp(z_i'theta))]
// minus ridge/2 * |theta|^2 (intercept excluded from the penalty) by
// Newton steps with step halving. Non-convergence is reported via the
// flag, not an exception.
LogisticFit fit_mle(const Matrix& design, const Vector& response,
                    const LogisticConfig& cfg = {});

// Smallest lambda at which the all-zero vector satisfies the subgradient
// condition of the no-intercept l1 problem: max_j |sum_i z_ij (y_i - 0.5)|.
double lambda_max(const Matrix& design, const Vector& response);

struct L1Fit {
  Vector coefficients;
  double lambda = 0.0;
  double lambda_max = 0.0;
  int iterations = 0;  // full CCD cycles
};

// Minimizes -l(theta) + lambda*|theta|_1 by cyclic coordinate descent with
// soft thresholding. For the no-intercept model, lambda >= lambda_max
// short-circuits to the exact all-zero solution.
L1Fit fit_l1(const Matrix& design, const Vector& response, double lambda,
             const LogisticConfig& cfg = {});

// Unpenalized logistic log-likelihood at theta (theta must already include
// the intercept coordinate if the design carries one).
double log_likelihood(const Matrix& design, const Vector& response,
                      const Vector& theta);

}  // namespace mlrank
