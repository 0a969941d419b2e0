#pragma once

#include "mlrank/dataset.hpp"
#include "mlrank/logistic.hpp"
#include "mlrank/types.hpp"

#include <string>
#include <vector>

namespace mlrank {

struct ChainConfig {
  LogisticConfig logistic{.intercept = true};  // base learners keep an intercept
};

struct ChainModel {
  std::vector<Index> label_order;     // chain positions -> label indices
  std::vector<Index> feature_subset;  // 0-based indices into the training feature matrix
  std::vector<Vector> coefficients;   // position m: |subset| + m entries (+1 intercept last)
  bool intercept = true;
};

// Fits one logistic model per chain position; position m sees the selected
// features plus the true values of the earlier labels in the order.
ChainModel train_chain(const MultiLabelDataset& ds,
                       const std::vector<Index>& feature_subset,
                       const std::vector<Index>& label_order,
                       const ChainConfig& cfg = {});

// Greedy inference: threshold each position's probability at 0.5 (ties
// predict 1) and feed the hard prediction forward. `features` must carry
// exactly the subset columns, in subset order. Returns an n x K binary
// matrix in original label-column order.
Matrix predict_chain(const ChainModel& model, const Matrix& features);

// Same per-position models, but each position conditions on the true
// earlier labels from `labels` instead of its own predictions. This scores
// the conditional models directly.
Matrix predict_chain_conditional(const ChainModel& model, const Matrix& features,
                                 const Matrix& labels);

// Versioned JSON: label order, feature subset, coefficient vectors.
void save_chain(const ChainModel& model, const std::string& path);
ChainModel load_chain(const std::string& path);

}  // namespace mlrank
