#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mlrank/rng.hpp"
#include "mlrank/synth.hpp"
#include "test_support.hpp"

#include <cmath>
#include <vector>

using namespace mlrank;

TEST_CASE("artdata1 defaults: shape, binary labels, relevant set") {
  const SynthResult r = make_artdata({.scenario = "artdata1", .seed = 1});
  CHECK(r.data.rows() == 1000);
  CHECK(r.data.feature_count() == 50);
  CHECK(r.data.label_count() == 10);
  CHECK(r.relevant == std::vector<Index>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  for (Index i = 0; i < r.data.rows(); ++i) {
    for (Index k = 0; k < 10; ++k) {
      const double y = r.data.labels(i, k);
      CHECK((y == 0.0 || y == 1.0));
    }
  }
  // standard Gaussian features: crude sanity on moments
  const double mean = r.data.features.mean();
  CHECK(std::abs(mean) < 0.02);
  const double var = r.data.features.array().square().mean() - mean * mean;
  CHECK(var == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("artdata2 labels decouple from features when interactions are removed") {
  // same seed: artdata1 and artdata2 differ only through the direct effects
  const SynthResult r1 = make_artdata({.scenario = "artdata1", .seed = 3});
  const SynthResult r2 = make_artdata({.scenario = "artdata2", .seed = 3});
  CHECK(r1.data.features == r2.data.features);  // identical draw order
  CHECK(r1.data.labels != r2.data.labels);
}

TEST_CASE("artdata3 rule block holds row by row") {
  const SynthResult r = make_artdata({.scenario = "artdata3", .seed = 11});
  const Matrix& x = r.data.features;
  const Matrix& y = r.data.labels;
  CHECK(r.data.rows() == 100);
  CHECK(r.relevant == std::vector<Index>{0, 1, 2, 3, 4, 5, 7, 8, 9});
  for (Index i = 0; i < 100; ++i) {
    CHECK(x(i, 5) == (x(i, 0) - x(i, 1)) / 2.0);
    CHECK(x(i, 6) == (x(i, 0) + x(i, 1)) / 2.0);
    // the pair (x6, x7) recovers x2 up to one rounding of x1 + x2
    CHECK(std::abs(x(i, 6) - x(i, 5) - x(i, 1)) <= 1e-15);
    CHECK(x(i, 7) == x(i, 2) + 0.1);
    CHECK(x(i, 8) == x(i, 3) - 0.2);
    CHECK(x(i, 9) == 2.0 * x(i, 4));
    CHECK(y(i, 0) == (x(i, 0) > x(i, 1) ? 1.0 : 0.0));
    CHECK(y(i, 1) == (x(i, 3) > x(i, 2) ? 1.0 : 0.0));
    CHECK(y(i, 2) == (y(i, 0) + y(i, 1) == 1.0 ? 1.0 : 0.0));
    CHECK(y(i, 3) == (x(i, 4) > 0.8 ? 1.0 : 0.0));
    for (Index j = 0; j < 5; ++j) {
      CHECK(x(i, j) >= 0.0);
      CHECK(x(i, j) < 1.0);
    }
  }
}

TEST_CASE("artdata4 keeps the xor label and the full relevant set") {
  const SynthResult r = make_artdata({.scenario = "artdata4", .seed = 11});
  CHECK(r.relevant.size() == 10);
  const Matrix& x = r.data.features;
  const Matrix& y = r.data.labels;
  int noisy_pair_differs = 0;
  for (Index i = 0; i < 100; ++i) {
    CHECK(y(i, 2) == (y(i, 0) + y(i, 1) == 1.0 ? 1.0 : 0.0));
    if (x(i, 5) != x(i, 0)) ++noisy_pair_differs;  // epsilon actually moved x6 off x1
  }
  CHECK(noisy_pair_differs == 100);
}

TEST_CASE("scenario parameter validation") {
  CHECK_THROWS_AS(make_artdata({.scenario = "artdata1", .p = 5}), std::invalid_argument);
  CHECK_THROWS_AS(make_artdata({.scenario = "artdata3", .K = 7}), std::invalid_argument);
  CHECK_THROWS_AS(make_artdata({.scenario = "nope"}), std::invalid_argument);
  CHECK_THROWS_AS(make_artdata({.scenario = "custom"}), std::invalid_argument);
  CHECK_THROWS_AS(make_artdata({.scenario = "artdata1", .n = -3}), std::invalid_argument);
}

TEST_CASE("generation is deterministic in the seed and row-separable") {
  const SynthResult a = make_artdata({.scenario = "artdata1", .n = 60, .seed = 21});
  const SynthResult b = make_artdata({.scenario = "artdata1", .n = 60, .seed = 21});
  CHECK(a.data.features == b.data.features);
  CHECK(a.data.labels == b.data.labels);

  const SynthResult c = make_artdata({.scenario = "artdata1", .n = 60, .seed = 22});
  CHECK(a.data.features != c.data.features);

  // each row has its own child stream: a longer dataset starts with the
  // shorter one
  const SynthResult longer = make_artdata({.scenario = "artdata1", .n = 90, .seed = 21});
  CHECK(longer.data.features.topRows(60) == a.data.features);
  CHECK(longer.data.labels.topRows(60) == a.data.labels);
}

TEST_CASE("gibbs sampler matches exact enumeration") {
  // small model where the 2^K joint is enumerable: K=3, p=2, nonzero a,
  // beta and feature-dependent couplings all at once
  IsingParams params;
  params.a.resize(3, 2);
  params.a << 0.4, -0.2, 0.0, 0.3, -0.5, 0.1;
  params.beta.resize(3, 3);
  params.beta << 0, 0.3, -0.2, 0.3, 0, 0.4, -0.2, 0.4, 0;
  params.b.assign(2, Matrix::Zero(3, 3));
  params.b[0](0, 1) = params.b[0](1, 0) = 0.5;
  params.b[1](1, 2) = params.b[1](2, 1) = -0.3;

  Vector x(2);
  x << 0.8, -1.1;
  const Vector exact = test_support::ising_joint_exact(params, x);

  const int draws = 40000;
  Vector empirical = Vector::Zero(8);
  RandomStream rng(77);
  for (int d = 0; d < draws; ++d) {
    const IntVector y = gibbs_sample_labels(x, params, 30, rng);
    int state = 0;
    for (Index k = 0; k < 3; ++k) state |= y(k) << k;
    empirical(state) += 1.0;
  }
  empirical /= static_cast<double>(draws);
  CHECK(test_support::total_variation(exact, empirical) <= 0.02);
}

TEST_CASE("gibbs sampler input validation and degenerate sweep counts") {
  IsingParams params;
  params.a = Matrix::Zero(2, 1);
  params.beta = Matrix::Zero(2, 2);

  Vector x(1);
  x << 0.5;
  RandomStream rng(1);
  CHECK_NOTHROW(gibbs_sample_labels(x, params, 0, rng));  // returns the initial state
  CHECK_THROWS_AS(gibbs_sample_labels(x, params, -1, rng), std::invalid_argument);

  Vector wrong(2);
  wrong << 0.5, 0.5;
  CHECK_THROWS_AS(gibbs_sample_labels(wrong, params, 5, rng), std::invalid_argument);

  IsingParams bad = params;
  bad.beta.resize(2, 2);
  bad.beta << 0, 0.3, -0.3, 0;  // asymmetric coupling
  CHECK_THROWS_AS(gibbs_sample_labels(x, bad, 5, rng), std::invalid_argument);
}

TEST_CASE("xor toy: exact combination balance and indicator feature") {
  const MultiLabelDataset ds = make_xor_toy(20, 400, 5);
  CHECK(ds.rows() == 400);
  CHECK(ds.feature_count() == 21);
  CHECK(ds.label_count() == 2);

  int counts[4] = {0, 0, 0, 0};
  for (Index i = 0; i < 400; ++i) {
    const int y1 = static_cast<int>(ds.labels(i, 0));
    const int y2 = static_cast<int>(ds.labels(i, 1));
    counts[y1 + 2 * y2] += 1;
    CHECK(ds.features(i, 0) == (y1 != y2 ? 1.0 : 0.0));
  }
  for (const int c : counts) CHECK(c == 100);

  // n not divisible by 4: combination counts stay within one of each other
  const MultiLabelDataset odd = make_xor_toy(3, 10, 5);
  int odd_counts[4] = {0, 0, 0, 0};
  for (Index i = 0; i < 10; ++i) {
    odd_counts[static_cast<int>(odd.labels(i, 0)) + 2 * static_cast<int>(odd.labels(i, 1))] += 1;
  }
  for (const int c : odd_counts) {
    CHECK(c >= 2);
    CHECK(c <= 3);
  }
}

TEST_CASE("custom scenario derives the relevant set from the parameters") {
  IsingParams params;
  params.a = Matrix::Zero(3, 6);
  params.a(0, 1) = 0.7;
  params.beta = Matrix::Constant(3, 3, 0.1);
  params.beta.diagonal().setZero();
  params.b.assign(6, Matrix::Zero(3, 3));
  params.b[4](0, 2) = params.b[4](2, 0) = 0.3;

  ScenarioSpec spec;
  spec.scenario = "custom";
  spec.n = 30;
  spec.custom_params = params;
  const SynthResult r = make_artdata(spec);
  CHECK(r.data.rows() == 30);
  CHECK(r.data.feature_count() == 6);
  CHECK(r.relevant == std::vector<Index>{1, 4});

  spec.K = 5;  // contradicts the parameter block
  CHECK_THROWS_AS(make_artdata(spec), std::invalid_argument);
}
