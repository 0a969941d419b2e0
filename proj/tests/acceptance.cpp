// End-to-end acceptance checks. Each criterion prints exactly one line:
//   criterion N: PASS|FAIL <what was checked; key numbers> (elapsed)
// A criterion also fails when it blows its wall-clock budget. Exit code 0
// only when every criterion passes.

#include "mlrank/chains.hpp"
#include "mlrank/dataset.hpp"
#include "mlrank/evaluation.hpp"
#include "mlrank/logistic.hpp"
#include "mlrank/rankers.hpp"
#include "mlrank/rng.hpp"
#include "mlrank/score_stat.hpp"
#include "mlrank/synth.hpp"
#include "mlrank/types.hpp"

#include "test_support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

using namespace mlrank;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", value);
  return buf;
}

// ---------------------------------------------------------------------------
// 1. score_univariate agrees with the full-information-matrix oracle, and the
//    multivariate statistic collapses to the univariate one for a single
//    column.

bool criterion1(std::string& note) {
  RandomStream rng(101);
  double worst_uni = 0.0, worst_multi = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Index n = 30 + static_cast<Index>(rng.uniform_int(71));
    const Index K = 3 + static_cast<Index>(rng.uniform_int(3));
    const Index k = static_cast<Index>(rng.uniform_int(static_cast<std::uint64_t>(K)));
    const MultiLabelDataset ds =
        test_support::random_dataset(n, 1, K, 9000 + static_cast<std::uint64_t>(i));
    const Vector xj = ds.features.col(0);

    const NullModelCache cache = build_null_cache(ds.labels, k);
    const ScoreResult uni = score_univariate(cache, xj);
    const double oracle = test_support::score_oracle(ds.labels, k, xj);
    worst_uni = std::max(worst_uni, std::abs(uni.value - oracle) /
                                        std::max(1.0, std::abs(oracle)));

    Matrix m(n, 1);
    m.col(0) = xj;
    const ScoreResult multi = score_multivariate(cache, m);
    worst_multi = std::max(worst_multi, std::abs(multi.value - uni.value) /
                                            std::max(1.0, std::abs(uni.value)));
  }
  note = "univariate vs oracle rel err " + fmt(worst_uni) +
         " (tol 1e-8), single-column multivariate rel err " + fmt(worst_multi) +
         " (tol 1e-10) over 100 instances";
  return worst_uni <= 1e-8 && worst_multi <= 1e-10;
}

// ---------------------------------------------------------------------------
// 2. Null calibration: u on an irrelevant feature behaves like chi2(1).

bool criterion2(std::string& note) {
  const Index n = 2000;
  const Index K = 5;
  IsingParams params;
  params.a = Matrix::Zero(K, 1);  // the lone model feature never acts
  params.beta = Matrix::Constant(K, K, 0.1);
  params.beta.diagonal().setZero();
  const Vector x_zero = Vector::Zero(1);

  std::vector<double> stats;
  stats.reserve(500);
  for (int rep = 0; rep < 500; ++rep) {
    RandomStream rng(SeedSequence(40000 + static_cast<std::uint64_t>(rep)).next());
    Matrix labels(n, K);
    Vector candidate(n);
    for (Index i = 0; i < n; ++i) {
      labels.row(i) =
          gibbs_sample_labels(x_zero, params, 30, rng).cast<double>().transpose();
      candidate(i) = rng.normal();
    }
    const NullModelCache cache = build_null_cache(labels, 0);
    stats.push_back(score_univariate(cache, candidate).value);
  }

  double mean = 0.0;
  for (const double u : stats) mean += u;
  mean /= static_cast<double>(stats.size());
  const double ks = test_support::ks_statistic_chi2_1(stats);
  const double ks_crit = 1.6276 / std::sqrt(500.0);  // alpha = 0.01

  note = "500 null replicates: mean u " + fmt(mean) + " (need [0.85,1.15]), KS " +
         fmt(ks) + " (crit " + fmt(ks_crit) + ")";
  return mean >= 0.85 && mean <= 1.15 && ks <= ks_crit;
}

// ---------------------------------------------------------------------------
// 3. Median u grows with the coefficient and with the sample size.

double median_u(Index n, double a1, std::uint64_t seed_base) {
  std::vector<double> stats;
  stats.reserve(50);
  for (int rep = 0; rep < 50; ++rep) {
    const MultiLabelDataset ds = test_support::logodds_toy(
        n, 10, a1, 0.1, seed_base + static_cast<std::uint64_t>(rep));
    const NullModelCache cache = build_null_cache(ds.labels, 0);
    stats.push_back(score_univariate(cache, ds.features.col(0)).value);
  }
  return test_support::median(stats);
}

bool criterion3(std::string& note) {
  const double m_a0 = median_u(1000, 0.0, 50000);
  const double m_a05 = median_u(1000, 0.5, 51000);
  const double m_a1 = median_u(1000, 1.0, 52000);
  const double m_n250 = median_u(250, 1.0, 53000);
  const double m_n1000 = median_u(1000, 1.0, 54000);
  const double m_n4000 = median_u(4000, 1.0, 55000);

  note = "median u over a1 {0,0.5,1}: " + fmt(m_a0) + " < " + fmt(m_a05) + " < " +
         fmt(m_a1) + "; over n {250,1000,4000}: " + fmt(m_n250) + " < " +
         fmt(m_n1000) + " < " + fmt(m_n4000);
  return m_a0 < m_a05 && m_a05 < m_a1 && m_n250 < m_n1000 && m_n1000 < m_n4000;
}

// ---------------------------------------------------------------------------
// 4/5. Ranking quality on the two synthetic label-model settings.

double mean_auc(const std::string& scenario, const std::string& method, int seeds) {
  RankerConfig cfg;
  cfg.method = parse_method(method);
  double total = 0.0;
  for (int seed = 1; seed <= seeds; ++seed) {
    ScenarioSpec spec;
    spec.scenario = scenario;
    spec.seed = static_cast<std::uint64_t>(seed);
    const SynthResult r = make_artdata(spec);
    const FeatureRanking ranking = rank_features(r.data, cfg);
    total += ranking_roc(ranking, r.relevant).auc;
  }
  return total / static_cast<double>(seeds);
}

bool criterion4(std::string& note) {
  const double ours = mean_auc("artdata1", "ising+score", 20);
  const double lp = mean_auc("artdata1", "lp-chi2", 20);
  note = "direct-effect data, 20 seeds: mean AUC ising+score " + fmt(ours) +
         " (need >= 0.9), lp-chi2 " + fmt(lp) + " (need gap > 0.05)";
  return ours >= 0.90 && ours > lp + 0.05;
}

bool criterion5(std::string& note) {
  const double ours = mean_auc("artdata2", "ising-inter+score", 20);
  const double br = mean_auc("artdata2", "br-ig", 20);
  const double lp = mean_auc("artdata2", "lp-ig", 20);
  note = "interaction-only data, 20 seeds: mean AUC ising-inter+score " + fmt(ours) +
         ", br-ig " + fmt(br) + ", lp-ig " + fmt(lp);
  return ours > br && ours > lp;
}

// ---------------------------------------------------------------------------
// 6. The interaction statistic sees the XOR feature; the plain one cannot.

bool criterion6(std::string& note) {
  int inter_first = 0;
  int plain_below_median = 0;
  RankerConfig inter_cfg, plain_cfg;
  inter_cfg.method = parse_method("ising-inter+score");
  plain_cfg.method = parse_method("ising+score");

  for (int seed = 1; seed <= 20; ++seed) {
    const MultiLabelDataset ds = make_xor_toy(20, 400, static_cast<std::uint64_t>(seed));
    const FeatureRanking inter = rank_features(ds, inter_cfg);
    if (inter.order.front() == 0) ++inter_first;

    const FeatureRanking plain = rank_features(ds, plain_cfg);
    std::vector<double> noise;
    for (Index j = 1; j < 21; ++j) noise.push_back(plain.importances(j));
    if (plain.importances(0) < test_support::median(noise)) ++plain_below_median;
  }
  note = "xor feature ranked first by the interaction statistic in " +
         std::to_string(inter_first) + "/20 seeds (need >= 18); plain importance "
         "below the noise median in " +
         std::to_string(plain_below_median) + "/20 (need >= 15)";
  return inter_first >= 18 && plain_below_median >= 15;
}

// ---------------------------------------------------------------------------
// 7. lambda = lambda_max lands exactly on the all-zero solution.

bool criterion7(std::string& note) {
  RandomStream rng(707);
  int exact = 0;
  for (int i = 0; i < 50; ++i) {
    const Index n = 40 + static_cast<Index>(rng.uniform_int(160));
    const Index d = 3 + static_cast<Index>(rng.uniform_int(8));
    Matrix z(n, d);
    Vector y(n);
    for (Index r = 0; r < n; ++r) {
      for (Index c = 0; c < d; ++c) z(r, c) = rng.normal();
      y(r) = rng.bernoulli(0.5) ? 1.0 : 0.0;
    }
    const double lmax = lambda_max(z, y);
    const L1Fit fit = fit_l1(z, y, lmax);
    if ((fit.coefficients.array() == 0.0).all()) ++exact;
  }
  note = "exact all-zero coefficient vectors at lambda = lambda_max: " +
         std::to_string(exact) + "/50";
  return exact == 50;
}

// ---------------------------------------------------------------------------
// 8. OR toy: the conditional chain model is exact with the feature, and caps
//    near 3/4 without it.

bool criterion8(std::string& note) {
  const Index n = 2000;
  MultiLabelDataset ds;
  ds.features.resize(n, 1);
  ds.labels.resize(n, 2);
  RandomStream rng(808);
  for (Index i = 0; i < n; ++i) {
    const double x = rng.bernoulli(0.5) ? 1.0 : 0.0;
    const double y2 = rng.bernoulli(0.5) ? 1.0 : 0.0;
    ds.features(i, 0) = x;
    ds.labels(i, 0) = x + y2 > 0 ? 1.0 : 0.0;  // y1 = y2 OR x1
    ds.labels(i, 1) = y2;
  }
  ds.feature_names = {"x1"};
  ds.label_names = {"y1", "y2"};

  const std::vector<Index> order{1, 0};  // y2 first, then y1 | (x1, y2)
  const ChainModel with_x = train_chain(ds, {0}, order);
  const Matrix pred_with =
      predict_chain_conditional(with_x, ds.features, ds.labels);
  const double acc_with =
      (pred_with.col(0).array() == ds.labels.col(0).array()).cast<double>().mean();

  const ChainModel without_x = train_chain(ds, {}, order);
  const Matrix no_features(n, 0);
  const Matrix pred_without =
      predict_chain_conditional(without_x, no_features, ds.labels);
  const double acc_without =
      (pred_without.col(0).array() == ds.labels.col(0).array()).cast<double>().mean();

  note = "y1 accuracy with x1 " + fmt(acc_with) + " (need >= 0.99), without x1 " +
         fmt(acc_without) + " (need [0.70,0.80])";
  return acc_with >= 0.99 && acc_without >= 0.70 && acc_without <= 0.80;
}

// ---------------------------------------------------------------------------
// 9. Hand-derived metric values reproduce bit-exactly.

bool criterion9(std::string& note) {
  Matrix t(1, 3), q(1, 3);
  t << 1, 1, 0;
  q << 1, 0, 1;
  const MetricsReport m = classification_metrics(t, q);

  FeatureRanking ranking;
  ranking.order = {0, 1, 2, 3};
  ranking.importances = Vector::Zero(4);
  const double auc = ranking_roc(ranking, {0, 2}).auc;

  note = "subset " + fmt(m.subset_accuracy) + " hamming " + fmt(m.hamming) +
         " jaccard " + fmt(m.jaccard) + " auc " + fmt(auc) +
         " (want exactly 0, 1/3, 1/3, 0.75)";
  return m.subset_accuracy == 0.0 && m.hamming == 1.0 / 3.0 &&
         m.jaccard == 1.0 / 3.0 && auc == 0.75;
}

// ---------------------------------------------------------------------------
// 10. Single-threaded wall time of ising+score is linear in p.

bool criterion10(std::string& note) {
  const MultiLabelDataset full = test_support::random_dataset(500, 5000, 5, 1001);
  RankerConfig cfg;
  cfg.method = parse_method("ising+score");
  cfg.threads = 1;

  const auto rank_slice = [&](Index p) {
    MultiLabelDataset ds;
    ds.features = full.features.leftCols(p);
    ds.labels = full.labels;
    const auto start = Clock::now();
    const FeatureRanking ranking = rank_features(ds, cfg);
    const double elapsed = seconds_since(start);
    return ranking.order.size() == static_cast<std::size_t>(p)
               ? elapsed
               : std::numeric_limits<double>::infinity();
  };

  rank_slice(1000);  // warmup
  const std::vector<double> ps{1000.0, 2000.0, 4000.0};
  std::vector<double> times(3, std::numeric_limits<double>::infinity());
  for (int rep = 0; rep < 3; ++rep) {  // best of three per size
    for (std::size_t i = 0; i < 3; ++i) {
      times[i] = std::min(times[i], rank_slice(static_cast<Index>(ps[i])));
    }
  }

  // least squares t = a + b p over the three sizes
  const double px = (ps[0] + ps[1] + ps[2]) / 3.0;
  const double ty = (times[0] + times[1] + times[2]) / 3.0;
  double sxy = 0.0, sxx = 0.0, sst = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    sxy += (ps[i] - px) * (times[i] - ty);
    sxx += (ps[i] - px) * (ps[i] - px);
    sst += (times[i] - ty) * (times[i] - ty);
  }
  const double slope = sxy / sxx;
  double ssr = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    const double fitted = ty + slope * (ps[i] - px);
    ssr += (times[i] - fitted) * (times[i] - fitted);
  }
  const double r2 = sst > 0.0 ? 1.0 - ssr / sst : 1.0;

  const double t5000 = rank_slice(5000);

  note = "times " + fmt(times[0]) + "/" + fmt(times[1]) + "/" + fmt(times[2]) +
         "s at p 1000/2000/4000, R^2 " + fmt(r2) + " (need >= 0.95); p=5000 in " +
         fmt(t5000) + "s (need < 10)";
  return r2 >= 0.95 && t5000 < 10.0;
}

struct Criterion {
  int id;
  const char* what;
  bool (*run)(std::string&);
  double budget_seconds;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "score statistic equals the full-information oracle", criterion1, 10.0},
      {2, "null score statistic is calibrated against chi2(1)", criterion2, 60.0},
      {3, "median score grows with effect size and sample size", criterion3, 120.0},
      {4, "direct-effect ranking beats label-powerset chi2", criterion4, 300.0},
      {5, "interaction ranking beats br-ig and lp-ig", criterion5, 600.0},
      {6, "interaction statistic isolates the xor feature", criterion6, 600.0},
      {7, "lambda_max yields exactly zero coefficients", criterion7, 60.0},
      {8, "conditional chain accuracy on the or toy", criterion8, 60.0},
      {9, "hand-derived metric values are bit exact", criterion9, 10.0},
      {10, "ranking wall time is linear in feature count", criterion10, 120.0},
  };

  bool all_pass = true;
  for (const Criterion& c : criteria) {
    const auto start = Clock::now();
    std::string note;
    bool pass = false;
    try {
      pass = c.run(note);
    } catch (const std::exception& e) {
      note = std::string("exception: ") + e.what();
    }
    const double elapsed = seconds_since(start);
    if (elapsed >= c.budget_seconds) {
      pass = false;
      note += " [over the " + fmt(c.budget_seconds) + "s budget]";
    }
    std::printf("criterion %d: %s %s; %s (%.1fs)\n", c.id, pass ? "PASS" : "FAIL",
                c.what, note.c_str(), elapsed);
    std::fflush(stdout);
    all_pass &= pass;
  }
  return all_pass ? 0 : 1;
}
