#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mlrank/rng.hpp"
#include "mlrank/score_stat.hpp"
#include "mlrank/types.hpp"
#include "test_support.hpp"

#include <cmath>
#include <vector>

using namespace mlrank;

TEST_CASE("univariate score matches the full-information oracle") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RandomStream rng(seed * 101);
    const Index n = 40 + static_cast<Index>(rng.uniform_int(60));
    const Index K = 3 + static_cast<Index>(rng.uniform_int(3));
    const MultiLabelDataset ds = test_support::random_dataset(n, 1, K, seed);
    const Index k = static_cast<Index>(rng.uniform_int(static_cast<std::uint64_t>(K)));

    const NullModelCache cache = build_null_cache(ds.labels, k);
    REQUIRE_FALSE(cache.degenerate);
    const double lib = score_univariate(cache, ds.features.col(0)).value;
    const double oracle = test_support::score_oracle(ds.labels, k, ds.features.col(0));
    CHECK(lib == doctest::Approx(oracle).epsilon(1e-8));
  }
}

TEST_CASE("multivariate statistic with one column reduces to the univariate one") {
  const MultiLabelDataset ds = test_support::random_dataset(120, 1, 4, 5);
  const NullModelCache cache = build_null_cache(ds.labels, 2);
  REQUIRE_FALSE(cache.degenerate);

  const double uni = score_univariate(cache, ds.features.col(0)).value;
  Matrix m(120, 1);
  m.col(0) = ds.features.col(0);
  const double multi = score_multivariate(cache, m).value;
  CHECK(multi == doctest::Approx(uni).epsilon(1e-10));
}

TEST_CASE("score is invariant to rescaling the candidate feature") {
  const MultiLabelDataset ds = test_support::random_dataset(90, 1, 3, 11);
  const NullModelCache cache = build_null_cache(ds.labels, 0);
  const double base = score_univariate(cache, ds.features.col(0)).value;
  for (const double c : {0.01, 3.0, -7.5}) {
    const Vector scaled = c * ds.features.col(0);
    CHECK(score_univariate(cache, scaled).value == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("informative feature scores far above an irrelevant one") {
  // y_1 leans on x via its conditional log-odds; x' is independent noise
  const Index n = 1500;
  RandomStream rng(17);
  Matrix labels(n, 3);
  Vector good(n), noise(n);
  for (Index i = 0; i < n; ++i) {
    good(i) = rng.normal();
    noise(i) = rng.normal();
    labels(i, 1) = rng.bernoulli(0.5) ? 1.0 : 0.0;
    labels(i, 2) = rng.bernoulli(0.5) ? 1.0 : 0.0;
    const double eta = 1.0 * good(i) + 0.1 * (labels(i, 1) + labels(i, 2));
    labels(i, 0) = rng.bernoulli(sigmoid(eta)) ? 1.0 : 0.0;
  }
  const NullModelCache cache = build_null_cache(labels, 0);
  const double u_good = score_univariate(cache, good).value;
  const double u_noise = score_univariate(cache, noise).value;
  CHECK(u_good > 100.0);
  CHECK(u_noise < 15.0);
  CHECK(u_good > 10.0 * u_noise);
}

TEST_CASE("candidate inside the span of the other labels is flagged collinear") {
  const MultiLabelDataset ds = test_support::random_dataset(80, 1, 4, 23);
  const NullModelCache cache = build_null_cache(ds.labels, 1);
  // the candidate equals one of the null-model columns
  const Vector xj = ds.labels.col(0);
  const ScoreResult res = score_univariate(cache, xj);
  CHECK(res.collinear);
  CHECK(res.value == 0.0);
}

TEST_CASE("constant label produces a degenerate cache and zero scores") {
  MultiLabelDataset ds = test_support::random_dataset(50, 1, 3, 31);
  ds.labels.col(0).setZero();
  const NullModelCache cache = build_null_cache(ds.labels, 0);
  CHECK(cache.degenerate);
  const ScoreResult res = score_univariate(cache, ds.features.col(0));
  CHECK(res.value == 0.0);
}

TEST_CASE("duplicated columns in the multivariate block stay finite") {
  const MultiLabelDataset ds = test_support::random_dataset(100, 1, 3, 41);
  const NullModelCache cache = build_null_cache(ds.labels, 0);
  Matrix m(100, 3);
  m.col(0) = ds.features.col(0);
  m.col(1) = ds.features.col(0);  // exact duplicate: V is singular
  m.col(2) = 2.0 * ds.features.col(0);
  const ScoreResult res = score_multivariate(cache, m);
  CHECK(std::isfinite(res.value));
  CHECK(res.collinear);
  // the pseudo-inverse keeps the informative direction
  const double uni = score_univariate(cache, ds.features.col(0)).value;
  CHECK(res.value == doctest::Approx(uni).epsilon(1e-8));
}

TEST_CASE("null scores have roughly unit mean") {
  // x independent of everything: u is approximately chi-squared(1)
  std::vector<double> values;
  for (std::uint64_t seed = 1; seed <= 300; ++seed) {
    RandomStream rng(seed * 7919);
    const Index n = 400;
    Matrix labels(n, 3);
    Vector x(n);
    for (Index i = 0; i < n; ++i) {
      x(i) = rng.normal();
      labels(i, 1) = rng.bernoulli(0.5) ? 1.0 : 0.0;
      labels(i, 2) = rng.bernoulli(0.5) ? 1.0 : 0.0;
      const double eta = 0.1 * (labels(i, 1) + labels(i, 2));
      labels(i, 0) = rng.bernoulli(sigmoid(eta)) ? 1.0 : 0.0;
    }
    const NullModelCache cache = build_null_cache(labels, 0);
    REQUIRE_FALSE(cache.degenerate);
    values.push_back(score_univariate(cache, x).value);
  }
  double mean = 0.0;
  for (const double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  CHECK(mean > 0.75);
  CHECK(mean < 1.25);
}

TEST_CASE("cache is reusable across many features without drift") {
  const MultiLabelDataset ds = test_support::random_dataset(60, 5, 3, 53);
  const NullModelCache cache = build_null_cache(ds.labels, 1);
  std::vector<double> first, second;
  for (Index j = 0; j < 5; ++j) first.push_back(score_univariate(cache, ds.features.col(j)).value);
  for (Index j = 0; j < 5; ++j) second.push_back(score_univariate(cache, ds.features.col(j)).value);
  CHECK(first == second);
}
