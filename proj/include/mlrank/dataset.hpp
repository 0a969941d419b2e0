#pragma once

#include "mlrank/types.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace mlrank {

struct MultiLabelDataset {
  Matrix features;  // n x p
  Matrix labels;    // n x K, entries 0/1
  std::vector<std::string> feature_names;
  std::vector<std::string> label_names;

  Index rows() const { return features.rows(); }
  Index feature_count() const { return features.cols(); }
  Index label_count() const { return labels.cols(); }
};

// Ingestion invariants: n >= 1, p >= 1, K >= 2, labels binary, features
// finite, names sized to the matrices. Throws std::invalid_argument.
// Callers that legitimately hold K=1 data (single-label chains) skip this.
void validate(const MultiLabelDataset& ds);

struct CsvOptions {
  bool has_header = true;
  bool labels_first = false;  // labels occupy the leading columns instead of the trailing ones
};

MultiLabelDataset load_csv(const std::string& path, Index label_count,
                           const CsvOptions& opts = {});
void write_csv(const MultiLabelDataset& ds, const std::string& path,
               const CsvOptions& opts = {});

struct DataSplit {
  std::vector<Index> train_idx;
  std::vector<Index> val_idx;
  std::vector<Index> test_idx;
};

// Sizes are round(frac * n); train is clamped to [1, n] and val to the
// remaining rows; whatever is left goes to test. Deterministic in seed.
DataSplit split(const MultiLabelDataset& ds, double train_frac, double val_frac,
                std::uint64_t seed);

MultiLabelDataset subset_rows(const MultiLabelDataset& ds,
                              const std::vector<Index>& idx);

struct DiscretizationMap {
  std::vector<std::vector<double>> boundaries;  // per feature, strictly increasing
  int bins = 0;

  // Number of boundaries strictly below x; always within {0..bins-1}.
  int code(Index feature, double x) const;
};

// Equal-frequency binning; codes are stored as doubles in the feature
// matrix. Labels and names pass through unchanged.
std::pair<MultiLabelDataset, DiscretizationMap> discretize(
    const MultiLabelDataset& ds, int bins);

// Each column is centered and scaled to unit population standard deviation
// (divide by n, not n-1). Constant columns become all-zero.
MultiLabelDataset standardize(const MultiLabelDataset& ds);

}  // namespace mlrank
