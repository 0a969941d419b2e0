#include "mlrank/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace mlrank {

namespace {

// Independent child seed per row: generation is row-separable, so datasets
// are reproducible no matter how rows are batched.
std::uint64_t row_seed(std::uint64_t master, Index row) {
  SeedSequence seq(master + static_cast<std::uint64_t>(row) * 0x9e3779b97f4a7c15ULL);
  return seq.next();
}

void fill_default_names(MultiLabelDataset& ds) {
  ds.feature_names.resize(static_cast<std::size_t>(ds.feature_count()));
  for (Index j = 0; j < ds.feature_count(); ++j) {
    ds.feature_names[static_cast<std::size_t>(j)] = "x" + std::to_string(j + 1);
  }
  ds.label_names.resize(static_cast<std::size_t>(ds.label_count()));
  for (Index k = 0; k < ds.label_count(); ++k) {
    ds.label_names[static_cast<std::size_t>(k)] = "y" + std::to_string(k + 1);
  }
}

void check_params(const IsingParams& params) {
  const Index K = params.label_count();
  const Index p = params.feature_count();
  if (K < 2 || p < 1) throw std::invalid_argument("params need K >= 2 and p >= 1");
  if (params.beta.rows() != K || params.beta.cols() != K) {
    throw std::invalid_argument("beta must be K x K");
  }
  if (!params.beta.isApprox(params.beta.transpose())) {
    throw std::invalid_argument("beta must be symmetric");
  }
  if (!params.b.empty()) {
    if (static_cast<Index>(params.b.size()) != p) {
      throw std::invalid_argument("b must hold one K x K slice per feature");
    }
    for (const Matrix& slice : params.b) {
      if (slice.rows() != K || slice.cols() != K) {
        throw std::invalid_argument("each b slice must be K x K");
      }
      if (!slice.isApprox(slice.transpose())) {
        throw std::invalid_argument("each b slice must be symmetric");
      }
    }
  }
}

IsingParams artdata_params(Index p, Index K, bool direct_effects) {
  IsingParams params;
  params.a = Matrix::Zero(K, p);
  if (direct_effects) params.a.leftCols(10).setConstant(0.2);
  params.beta = Matrix::Constant(K, K, 0.1);
  params.beta.diagonal().setZero();
  params.b.assign(static_cast<std::size_t>(p), Matrix::Zero(K, K));
  for (Index s = 0; s < 10; ++s) {
    params.b[static_cast<std::size_t>(s)](0, 1) = 0.2;
    params.b[static_cast<std::size_t>(s)](1, 0) = 0.2;
  }
  return params;
}

SynthResult make_gibbs_scenario(const IsingParams& params, Index n, int sweeps,
                                std::uint64_t seed, std::vector<Index> relevant) {
  const Index p = params.feature_count();
  const Index K = params.label_count();
  SynthResult out;
  out.data.features.resize(n, p);
  out.data.labels.resize(n, K);
  for (Index i = 0; i < n; ++i) {
    RandomStream rng(row_seed(seed, i));
    Vector x(p);
    for (Index j = 0; j < p; ++j) x(j) = rng.normal();
    const IntVector y = gibbs_sample_labels(x, params, sweeps, rng);
    out.data.features.row(i) = x.transpose();
    out.data.labels.row(i) = y.cast<double>().transpose();
  }
  fill_default_names(out.data);
  validate(out.data);
  out.relevant = std::move(relevant);
  return out;
}

SynthResult make_rule_scenario(Index n, Index p, std::uint64_t seed, bool noisy) {
  SynthResult out;
  out.data.features.resize(n, p);
  out.data.labels.resize(n, 4);
  for (Index i = 0; i < n; ++i) {
    RandomStream rng(row_seed(seed, i));
    Vector x(p);
    for (Index j = 0; j < 5; ++j) x(j) = rng.uniform01();
    if (noisy) {
      // each occurrence of the noise term is an independent draw
      for (Index j = 0; j < 5; ++j) x(5 + j) = x(j) + rng.normal(0.0, 0.3);
    } else {
      x(5) = (x(0) - x(1)) / 2.0;
      x(6) = (x(0) + x(1)) / 2.0;
      x(7) = x(2) + 0.1;
      x(8) = x(3) - 0.2;
      x(9) = 2.0 * x(4);
    }
    for (Index j = 10; j < p; ++j) x(j) = rng.uniform01();

    double y1, y2, y4;
    if (noisy) {
      y1 = x(0) > x(1) + rng.normal(0.0, 0.3) ? 1.0 : 0.0;
      y2 = x(3) > x(2) + rng.normal(0.0, 0.3) ? 1.0 : 0.0;
      y4 = x(4) + rng.normal(0.0, 0.3) > 0.8 ? 1.0 : 0.0;
    } else {
      y1 = x(0) > x(1) ? 1.0 : 0.0;
      y2 = x(3) > x(2) ? 1.0 : 0.0;
      y4 = x(4) > 0.8 ? 1.0 : 0.0;
    }
    const double y3 = y1 + y2 == 1.0 ? 1.0 : 0.0;
    out.data.features.row(i) = x.transpose();
    out.data.labels.row(i) << y1, y2, y3, y4;
  }
  fill_default_names(out.data);
  validate(out.data);
  if (noisy) {
    out.relevant = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  } else {
    out.relevant = {0, 1, 2, 3, 4, 5, 7, 8, 9};  // x7 carries no label information
  }
  return out;
}

}  // namespace

IntVector gibbs_sample_labels(const Vector& x_row, const IsingParams& params,
                              int sweeps, RandomStream& rng) {
  check_params(params);
  if (x_row.size() != params.feature_count()) {
    throw std::invalid_argument("x_row length must match params");
  }
  if (sweeps < 0) throw std::invalid_argument("sweeps must be >= 0");
  const Index K = params.label_count();

  const Vector alpha = params.a * x_row;
  Matrix gamma = params.beta;
  if (!params.b.empty()) {
    for (Index s = 0; s < x_row.size(); ++s) {
      if (x_row(s) != 0.0) gamma += x_row(s) * params.b[static_cast<std::size_t>(s)];
    }
  }

  IntVector y(K);
  for (Index k = 0; k < K; ++k) y(k) = rng.bernoulli(0.5) ? 1 : 0;
  for (int rep = 0; rep < sweeps; ++rep) {
    for (Index k = 0; k < K; ++k) {
      double eta = alpha(k);
      for (Index l = 0; l < K; ++l) {
        if (l != k && y(l) == 1) eta += gamma(k, l);
      }
      y(k) = rng.bernoulli(sigmoid(eta)) ? 1 : 0;
    }
  }
  return y;
}

SynthResult make_artdata(const ScenarioSpec& spec) {
  if (spec.n < 0 || spec.p < 0 || spec.K < 0) {
    throw std::invalid_argument("n, p, K must be nonnegative (0 = scenario default)");
  }
  if (spec.gibbs_sweeps < 0) throw std::invalid_argument("gibbs_sweeps must be >= 0");

  if (spec.scenario == "artdata1" || spec.scenario == "artdata2") {
    const Index n = spec.n > 0 ? spec.n : 1000;
    const Index p = spec.p > 0 ? spec.p : 50;
    const Index K = spec.K > 0 ? spec.K : 10;
    if (p < 10) throw std::invalid_argument(spec.scenario + " needs p >= 10");
    if (K < 2) throw std::invalid_argument(spec.scenario + " needs K >= 2");
    const IsingParams params = artdata_params(p, K, spec.scenario == "artdata1");
    std::vector<Index> relevant(10);
    std::iota(relevant.begin(), relevant.end(), Index{0});
    return make_gibbs_scenario(params, n, spec.gibbs_sweeps, spec.seed,
                               std::move(relevant));
  }

  if (spec.scenario == "artdata3" || spec.scenario == "artdata4") {
    const Index n = spec.n > 0 ? spec.n : 100;
    const Index p = spec.p > 0 ? spec.p : 50;
    if (p < 10) throw std::invalid_argument(spec.scenario + " needs p >= 10");
    if (spec.K != 0 && spec.K != 4) {
      throw std::invalid_argument(spec.scenario + " has exactly 4 labels");
    }
    return make_rule_scenario(n, p, spec.seed, spec.scenario == "artdata4");
  }

  if (spec.scenario == "xor") {
    const Index n = spec.n > 0 ? spec.n : 400;
    if (spec.K != 0 && spec.K != 2) {
      throw std::invalid_argument("xor has exactly 2 labels");
    }
    const Index noise = spec.p > 0 ? spec.p - 1 : spec.noise_features;
    if (noise < 1) throw std::invalid_argument("xor needs at least one noise feature");
    SynthResult out;
    out.data = make_xor_toy(noise, n, spec.seed);
    out.relevant = {0};
    return out;
  }

  if (spec.scenario == "custom") {
    if (!spec.custom_params) {
      throw std::invalid_argument("custom scenario needs custom_params");
    }
    check_params(*spec.custom_params);
    const IsingParams& params = *spec.custom_params;
    const Index n = spec.n > 0 ? spec.n : 1000;
    if (spec.p != 0 && spec.p != params.feature_count()) {
      throw std::invalid_argument("p conflicts with custom_params");
    }
    if (spec.K != 0 && spec.K != params.label_count()) {
      throw std::invalid_argument("K conflicts with custom_params");
    }
    std::vector<Index> relevant;
    for (Index j = 0; j < params.feature_count(); ++j) {
      bool used = (params.a.col(j).array() != 0.0).any();
      if (!used && !params.b.empty()) {
        used = (params.b[static_cast<std::size_t>(j)].array() != 0.0).any();
      }
      if (used) relevant.push_back(j);
    }
    return make_gibbs_scenario(params, n, spec.gibbs_sweeps, spec.seed,
                               std::move(relevant));
  }

  throw std::invalid_argument(
      "unknown scenario '" + spec.scenario +
      "'; valid: artdata1 artdata2 artdata3 artdata4 xor custom");
}

MultiLabelDataset make_xor_toy(Index noise_features, Index n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (noise_features < 1) throw std::invalid_argument("need at least one noise feature");

  // label combinations 00,10,01,11 dealt round-robin, then shuffled: counts
  // stay within one of each other, so the plain score of x1 cancels exactly
  // at n divisible by 4
  std::vector<int> combo(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) combo[static_cast<std::size_t>(i)] = static_cast<int>(i % 4);
  RandomStream master(SeedSequence(seed).next());
  master.shuffle(combo);

  MultiLabelDataset ds;
  ds.features.resize(n, 1 + noise_features);
  ds.labels.resize(n, 2);
  for (Index i = 0; i < n; ++i) {
    const int c = combo[static_cast<std::size_t>(i)];
    const int y1 = c & 1;
    const int y2 = (c >> 1) & 1;
    ds.labels(i, 0) = y1;
    ds.labels(i, 1) = y2;
    ds.features(i, 0) = y1 != y2 ? 1.0 : 0.0;
    RandomStream rng(row_seed(seed, i));
    for (Index j = 0; j < noise_features; ++j) ds.features(i, 1 + j) = rng.normal();
  }
  fill_default_names(ds);
  validate(ds);
  return ds;
}

}  // namespace mlrank
