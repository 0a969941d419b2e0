#include "mlrank/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mlrank {

namespace {

constexpr double kProbEps = 1e-12;

void check_problem(const Matrix& design, const Vector& response) {
  if (design.rows() != response.size()) {
    throw std::invalid_argument("design rows must match response length");
  }
  if (design.rows() < 1) throw std::invalid_argument("design needs at least one row");
  if (!design.allFinite()) throw std::invalid_argument("design has non-finite entries");
  for (Index i = 0; i < response.size(); ++i) {
    if (response(i) != 0.0 && response(i) != 1.0) {
      throw std::invalid_argument("response entries must be 0 or 1");
    }
  }
}

Matrix with_intercept(const Matrix& design) {
  Matrix z(design.rows(), design.cols() + 1);
  z.leftCols(design.cols()) = design;
  z.col(design.cols()).setOnes();
  return z;
}

Vector clamped_probs(const Vector& eta) {
  Vector p(eta.size());
  for (Index i = 0; i < eta.size(); ++i) {
    p(i) = std::clamp(sigmoid(eta(i)), kProbEps, 1.0 - kProbEps);
  }
  return p;
}

double raw_log_likelihood(const Vector& eta, const Vector& response) {
  double ll = 0.0;
  for (Index i = 0; i < eta.size(); ++i) {
    ll += response(i) * eta(i) - log1pexp(eta(i));
  }
  return ll;
}

}  // namespace

double log_likelihood(const Matrix& design, const Vector& response,
                      const Vector& theta) {
  if (design.cols() != theta.size()) {
    throw std::invalid_argument("theta length must match design columns");
  }
  return raw_log_likelihood(design * theta, response);
}

LogisticFit fit_mle(const Matrix& design, const Vector& response,
                    const LogisticConfig& cfg) {
  check_problem(design, response);
  if (design.cols() < 1 && !cfg.intercept) {
    // intercept-only fits are legal (chain heads with no features);
    // a truly empty model is not
    throw std::invalid_argument("design needs at least one column");
  }
  const Matrix z = cfg.intercept ? with_intercept(design) : design;
  const Index d = z.cols();
  const Index penalized = cfg.intercept ? d - 1 : d;  // intercept is unpenalized

  Vector theta = Vector::Zero(d);
  const auto penalized_ll = [&](const Vector& t, const Vector& eta) {
    return raw_log_likelihood(eta, response) -
           0.5 * cfg.ridge * t.head(penalized).squaredNorm();
  };

  Vector eta = Vector::Zero(z.rows());
  double current = penalized_ll(theta, eta);
  bool converged = false;
  int iter = 0;

  // Convergence is judged relative to the gradient at theta = 0 (which is
  // z'(y - 1/2) exactly): rounding in z' * r floors the achievable gradient
  // near n^2 * eps, so a fixed tolerance stalls on large samples.
  const double tol =
      cfg.tol * std::max(1.0, (z.transpose() * (response.array() - 0.5).matrix())
                                  .cwiseAbs()
                                  .maxCoeff());

  for (; iter < cfg.max_iter; ++iter) {
    const Vector p = clamped_probs(eta);
    Vector grad = z.transpose() * (response - p);
    grad.head(penalized) -= cfg.ridge * theta.head(penalized);
    if (grad.cwiseAbs().maxCoeff() <= tol) {
      converged = true;
      break;
    }

    const Vector w = p.array() * (1.0 - p.array());
    Matrix hess = z.transpose() * w.asDiagonal() * z;
    // ridge on the penalized block; a tiny jitter keeps the intercept row
    // solvable without changing the optimum
    hess.diagonal().head(penalized).array() += cfg.ridge;
    if (cfg.intercept) hess(d - 1, d - 1) += 1e-12;

    const Vector delta = hess.ldlt().solve(grad);
    double step = 1.0;
    bool accepted = false;
    // the summed likelihood resolves differences down to a few ulps of its
    // magnitude, so the no-worse test has to be relative
    const double ll_slack = 1e-12 * std::max(1.0, std::abs(current));
    for (int half = 0; half < 40; ++half) {
      Vector candidate = theta + step * delta;
      candidate = candidate.cwiseMax(-cfg.coef_cap).cwiseMin(cfg.coef_cap);
      const Vector cand_eta = z * candidate;
      const double cand_ll = penalized_ll(candidate, cand_eta);
      if (cand_ll >= current - ll_slack) {
        accepted = (candidate - theta).cwiseAbs().maxCoeff() > 0.0;
        theta = candidate;
        eta = cand_eta;
        current = cand_ll;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // stalled against the cap or numerics
  }

  LogisticFit fit;
  fit.coefficients = theta;
  fit.converged = converged;
  fit.iterations = iter;
  fit.fitted_probabilities = clamped_probs(eta);
  fit.final_log_likelihood = raw_log_likelihood(eta, response);
  return fit;
}

double lambda_max(const Matrix& design, const Vector& response) {
  check_problem(design, response);
  if (design.cols() < 1) throw std::invalid_argument("design needs at least one column");
  return (design.transpose() * (response.array() - 0.5).matrix())
      .cwiseAbs()
      .maxCoeff();
}

L1Fit fit_l1(const Matrix& design, const Vector& response, double lambda,
             const LogisticConfig& cfg) {
  check_problem(design, response);
  if (design.cols() < 1) throw std::invalid_argument("design needs at least one column");
  if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");

  L1Fit out;
  out.lambda = lambda;
  out.lambda_max = lambda_max(design, response);

  // At lambda >= lambda_max the zero vector satisfies the subgradient
  // condition of the no-intercept problem, so it is the exact solution.
  if (!cfg.intercept && lambda >= out.lambda_max) {
    out.coefficients = Vector::Zero(design.cols());
    out.iterations = 0;
    return out;
  }

  const Matrix z = cfg.intercept ? with_intercept(design) : design;
  const Index d = z.cols();
  const Index n = z.rows();
  const Index last_penalized = cfg.intercept ? d - 1 : d;

  Vector theta = Vector::Zero(d);
  Vector eta = Vector::Zero(n);
  Vector trust = Vector::Ones(d);  // per-coordinate step bounds
  const double change_tol = 1e-7;
  int cycles = 0;

  // change in -l + lambda|theta|_1 for a step of size step on coordinate j
  const auto objective_delta = [&](Index j, double step, bool pen) {
    double dl = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double e0 = eta(i);
      const double e1 = e0 + step * z(i, j);
      dl += log1pexp(e1) - log1pexp(e0) - response(i) * step * z(i, j);
    }
    if (pen) {
      dl += lambda * (std::abs(theta(j) + step) - std::abs(theta(j)));
    }
    return dl;
  };

  for (; cycles < cfg.max_iter; ++cycles) {
    double max_change = 0.0;
    for (Index j = 0; j < d; ++j) {
      double g = 0.0;
      double h = 0.0;
      for (Index i = 0; i < n; ++i) {
        const double p = std::clamp(sigmoid(eta(i)), kProbEps, 1.0 - kProbEps);
        g += z(i, j) * (p - response(i));
        h += z(i, j) * z(i, j) * p * (1.0 - p);
      }
      if (h < 1e-12) continue;

      const bool pen = j < last_penalized;
      double target;
      if (pen) {
        // minimizer of the local quadratic plus the l1 term: soft threshold
        const double a = h * theta(j) - g;
        target = (a > lambda) ? (a - lambda) / h : (a < -lambda) ? (a + lambda) / h : 0.0;
      } else {
        target = theta(j) - g / h;
      }

      double step = std::clamp(target - theta(j), -trust(j), trust(j));
      step = std::clamp(theta(j) + step, -cfg.coef_cap, cfg.coef_cap) - theta(j);

      // the quadratic model can overshoot; halve until the true objective
      // does not increase
      int halvings = 0;
      while (step != 0.0 && objective_delta(j, step, pen) > 1e-12 && halvings < 20) {
        step *= 0.5;
        ++halvings;
      }
      if (halvings == 20) {
        trust(j) *= 0.5;
        continue;
      }
      if (step != 0.0) {
        theta(j) += step;
        eta += step * z.col(j);
      }
      trust(j) = std::max(2.0 * std::abs(step), trust(j) * 0.5);
      max_change = std::max(max_change, std::abs(step));
    }
    if (max_change < change_tol) {
      ++cycles;
      break;
    }
  }

  out.coefficients = theta;
  out.iterations = cycles;
  return out;
}

}  // namespace mlrank
