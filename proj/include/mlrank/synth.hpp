#pragma once

#include "mlrank/dataset.hpp"
#include "mlrank/rng.hpp"
#include "mlrank/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mlrank {

// Parameters of the conditional label model
//   P(y|x) propto exp[ sum_k a_k'x y_k + sum_{k<l} (beta_kl + b_kl'x) y_k y_l ].
struct IsingParams {
  Matrix a;               // K x p
  Matrix beta;            // K x K, symmetric, zero diagonal
  std::vector<Matrix> b;  // per feature s: K x K slice b[s](k,l), symmetric, zero diagonal;
                          // empty vector means all-zero tensor

  Index label_count() const { return a.rows(); }
  Index feature_count() const { return a.cols(); }
};

// Full conditional implied by the model above:
//   logit P(y_k=1 | x, y_{-k}) = a_k'x + sum_{l != k} (beta_kl + b_kl'x) y_l.
// One sweep redraws y_1..y_K in ascending order; the state after the last
// sweep is returned. Initial state: iid Bernoulli(0.5).
IntVector gibbs_sample_labels(const Vector& x_row, const IsingParams& params,
                              int sweeps, RandomStream& rng);

struct ScenarioSpec {
  std::string scenario = "artdata1";  // artdata1..4, xor, custom
  Index n = 0;                        // 0 picks the scenario default
  Index p = 0;
  Index K = 0;
  std::uint64_t seed = 1;
  int gibbs_sweeps = 30;
  Index noise_features = 20;          // xor scenario only
  std::optional<IsingParams> custom_params;  // custom scenario only
};

struct SynthResult {
  MultiLabelDataset data;
  std::vector<Index> relevant;  // 0-based feature indices
};

SynthResult make_artdata(const ScenarioSpec& spec);

// Balanced two-label XOR: each label combination appears floor(n/4) or
// ceil(n/4) times, x1 = 1 iff the labels differ, plus iid Gaussian noise
// features.
MultiLabelDataset make_xor_toy(Index noise_features, Index n, std::uint64_t seed);

}  // namespace mlrank
