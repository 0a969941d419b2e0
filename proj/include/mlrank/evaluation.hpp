#pragma once

#include "mlrank/chains.hpp"
#include "mlrank/dataset.hpp"
#include "mlrank/rankers.hpp"
#include "mlrank/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mlrank {

struct RocCurve {
  std::vector<double> fpr;  // index k-1 holds the point after the top-k prefix
  std::vector<double> tpr;
  double auc = 0.0;
};

// TPR(k) = |top_k intersect t| / |t|, FPR(k) = |top_k \ t| / |t^C|; AUC by
// trapezoid over the polyline with (0,0) prepended. The accumulation is done
// in integer counts so that a perfect ordering yields exactly 1.
RocCurve ranking_roc(const FeatureRanking& ranking,
                     const std::vector<Index>& relevant);

struct MetricsReport {
  double subset_accuracy = 0.0;
  double hamming = 0.0;  // per-label agreement rate
  double jaccard = 0.0;  // |pred AND true| / |pred OR true|, empty union counts as 1
};

MetricsReport classification_metrics(const Matrix& y_true, const Matrix& y_pred);

struct SelectionResult {
  std::vector<Index> chosen_subset;  // prefix of the ranking
  Vector prefix_scores;              // validation subset accuracy, sizes 1..L
  Index budget = 0;                  // L
};

// L = ceil(budget_frac * p). Splits the rows (1 - val_frac)/val_frac, trains
// a chain per ranking prefix of size 1..L on the fit part, and keeps the
// prefix with the best validation subset accuracy (ties: smallest prefix).
SelectionResult select_features(const MultiLabelDataset& ds,
                                const FeatureRanking& ranking,
                                double budget_frac, double val_frac,
                                std::uint64_t seed, const ChainConfig& chain_cfg = {},
                                int threads = 0);

// roc.csv rows: source,k,fpr,tpr with a pointwise-mean curve appended under
// source "mean". All curves must have equal length.
void write_roc_csv(const std::vector<std::string>& sources,
                   const std::vector<RocCurve>& curves, const std::string& path);

// auc.csv rows: source,auc plus a final mean row.
void write_auc_csv(const std::vector<std::string>& sources,
                   const std::vector<RocCurve>& curves, const std::string& path);

void write_metrics_csv(const MetricsReport& report, const std::string& path);

// selection.csv rows: prefix_size,subset_accuracy,chosen (chosen = 0/1 marker).
void write_selection_csv(const SelectionResult& result, const std::string& path);

}  // namespace mlrank
