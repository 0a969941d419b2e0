#pragma once

#include "mlrank/dataset.hpp"
#include "mlrank/score_stat.hpp"
#include "mlrank/types.hpp"

#include <string>
#include <vector>

namespace mlrank {

enum class RankMethod {
  ising_score,
  ising_inter_score,
  ising_l1,
  br_chi2,
  br_ig,
  lp_chi2,
  lp_ig,
};

enum class RankStat { chi2, ig };

// Throws std::invalid_argument listing the valid names on a bad input.
RankMethod parse_method(const std::string& name);
std::string method_name(RankMethod method);
const std::vector<std::string>& method_names();

struct RankerConfig {
  RankMethod method = RankMethod::ising_score;
  int bins = 10;                    // discretization for chi2/ig baselines
  double lambda_factor = 1e-4;      // lambda = factor * lambda_max per label
  int lp_min_count = 0;             // tau: drop label combinations rarer than this (0 = keep all)
  bool standardize = true;          // Ising methods standardize features first
  bool joint_interactions = false;  // interaction ranker: one multivariate statistic per label
                                    // instead of the per-interaction sum
  int threads = 0;                  // 0 = resolve from MLRANK_THREADS / hardware
  ScoreConfig score;
};

struct FeatureRanking {
  std::vector<Index> order;  // feature indices by descending importance, ties by ascending index
  Vector importances;        // indexed by feature
  std::string method;
  Matrix per_label_scores;   // p x K per-label contributions; empty for lp methods
};

FeatureRanking rank_features(const MultiLabelDataset& ds, const RankerConfig& cfg);

FeatureRanking rank_ising_score(const MultiLabelDataset& ds, const RankerConfig& cfg);
FeatureRanking rank_ising_inter_score(const MultiLabelDataset& ds, const RankerConfig& cfg);
FeatureRanking rank_ising_l1(const MultiLabelDataset& ds, const RankerConfig& cfg);
FeatureRanking rank_br(const MultiLabelDataset& ds, const RankerConfig& cfg, RankStat stat);
FeatureRanking rank_lp(const MultiLabelDataset& ds, const RankerConfig& cfg, RankStat stat);

// Pearson chi-squared over the observed contingency table; cells with zero
// expected count are skipped.
double chi2_statistic(const IntVector& feature_codes, const IntVector& target_codes);

// H(target) - H(target | feature) with plug-in entropies in nats.
double info_gain(const IntVector& feature_codes, const IntVector& target_codes);

// Sum of u_k over the plain column and each product column xj*y_s, with the
// per-term values exposed through ScoreResult::components
// (plain first, then s in ascending label order skipping k).
ScoreResult inter_score_breakdown(const NullModelCache& cache,
                                  const Eigen::Ref<const Vector>& xj,
                                  const Matrix& labels);

// Columns: rank,feature_index,feature_name,importance (indices 1-based).
void write_ranking_csv(const FeatureRanking& ranking,
                       const std::vector<std::string>& feature_names,
                       const std::string& path);
FeatureRanking load_ranking_csv(const std::string& path);

}  // namespace mlrank
