#include "mlrank/chains.hpp"

#include "mlrank/text.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace mlrank {

namespace {

using nlohmann::json;

void check_indices(const std::vector<Index>& idx, Index bound, const char* what) {
  std::vector<bool> seen(static_cast<std::size_t>(bound), false);
  for (const Index v : idx) {
    if (v < 0 || v >= bound) throw std::invalid_argument(std::string(what) + " index out of range");
    if (seen[static_cast<std::size_t>(v)]) throw std::invalid_argument(std::string(what) + " indices must be distinct");
    seen[static_cast<std::size_t>(v)] = true;
  }
}

// Design for chain position m: selected features, then the m earlier labels
// (supplied by the caller), intercept appended by the fitter.
Matrix position_design(const Matrix& features, const Matrix& earlier, Index m) {
  Matrix design(features.rows(), features.cols() + m);
  design.leftCols(features.cols()) = features;
  if (m > 0) design.rightCols(m) = earlier.leftCols(m);
  return design;
}

}  // namespace

ChainModel train_chain(const MultiLabelDataset& ds,
                       const std::vector<Index>& feature_subset,
                       const std::vector<Index>& label_order,
                       const ChainConfig& cfg) {
  if (label_order.empty()) throw std::invalid_argument("label_order must be nonempty");
  check_indices(feature_subset, ds.feature_count(), "feature");
  check_indices(label_order, ds.label_count(), "label");
  if (static_cast<Index>(label_order.size()) != ds.label_count()) {
    throw std::invalid_argument("label_order must cover every label");
  }

  const Index n = ds.rows();
  const Index K = ds.label_count();
  const Index s = static_cast<Index>(feature_subset.size());

  Matrix features(n, s);
  for (Index j = 0; j < s; ++j) {
    features.col(j) = ds.features.col(feature_subset[static_cast<std::size_t>(j)]);
  }
  Matrix earlier(n, K);  // true labels in chain order, filled as the chain grows

  ChainModel model;
  model.label_order = label_order;
  model.feature_subset = feature_subset;
  model.intercept = cfg.logistic.intercept;
  model.coefficients.reserve(label_order.size());

  LogisticConfig lcfg = cfg.logistic;
  for (Index m = 0; m < K; ++m) {
    const Index label = label_order[static_cast<std::size_t>(m)];
    const Matrix design = position_design(features, earlier, m);
    const LogisticFit fit = fit_mle(design, ds.labels.col(label), lcfg);
    model.coefficients.push_back(fit.coefficients);
    earlier.col(m) = ds.labels.col(label);
  }
  return model;
}

namespace {

Matrix predict_impl(const ChainModel& model, const Matrix& features,
                    const Matrix* true_labels) {
  const Index K = static_cast<Index>(model.label_order.size());
  const Index s = static_cast<Index>(model.feature_subset.size());
  if (features.cols() != s) {
    throw std::invalid_argument("feature matrix must carry exactly the subset columns");
  }
  if (static_cast<Index>(model.coefficients.size()) != K) {
    throw std::invalid_argument("model holds the wrong number of positions");
  }
  const Index n = features.rows();
  Matrix out(n, K);
  Matrix earlier(n, K);
  for (Index m = 0; m < K; ++m) {
    const Index label = model.label_order[static_cast<std::size_t>(m)];
    const Vector& coef = model.coefficients[static_cast<std::size_t>(m)];
    const Index expected = s + m + (model.intercept ? 1 : 0);
    if (coef.size() != expected) {
      throw std::invalid_argument("coefficient length mismatch at chain position");
    }
    Vector eta = features * coef.head(s);
    if (m > 0) eta += earlier.leftCols(m) * coef.segment(s, m);
    if (model.intercept) eta.array() += coef(coef.size() - 1);
    for (Index i = 0; i < n; ++i) {
      out(i, label) = sigmoid(eta(i)) >= 0.5 ? 1.0 : 0.0;
    }
    if (true_labels != nullptr) {
      earlier.col(m) = true_labels->col(label);
    } else {
      earlier.col(m) = out.col(label);
    }
  }
  return out;
}

}  // namespace

Matrix predict_chain(const ChainModel& model, const Matrix& features) {
  return predict_impl(model, features, nullptr);
}

Matrix predict_chain_conditional(const ChainModel& model, const Matrix& features,
                                 const Matrix& labels) {
  if (labels.rows() != features.rows() ||
      labels.cols() != static_cast<Index>(model.label_order.size())) {
    throw std::invalid_argument("label matrix shape mismatch");
  }
  return predict_impl(model, features, &labels);
}

void save_chain(const ChainModel& model, const std::string& path) {
  json doc;
  doc["format"] = "mlrank-chain";
  doc["version"] = 1;
  doc["intercept"] = model.intercept;
  doc["label_order"] = model.label_order;
  doc["feature_subset"] = model.feature_subset;
  json coefs = json::array();
  for (const Vector& c : model.coefficients) {
    json row = json::array();
    for (Index i = 0; i < c.size(); ++i) row.push_back(format_double(c(i)));
    coefs.push_back(std::move(row));
  }
  doc["coefficients"] = std::move(coefs);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing: " + path);
}

ChainModel load_chain(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw std::runtime_error("invalid chain file " + path + ": " + e.what());
  }
  if (doc.value("format", "") != "mlrank-chain" || doc.value("version", 0) != 1) {
    throw std::runtime_error("unrecognized chain file format: " + path);
  }
  ChainModel model;
  model.intercept = doc.at("intercept").get<bool>();
  model.label_order = doc.at("label_order").get<std::vector<Index>>();
  model.feature_subset = doc.at("feature_subset").get<std::vector<Index>>();
  for (const json& row : doc.at("coefficients")) {
    Vector c(static_cast<Index>(row.size()));
    Index i = 0;
    for (const json& cell : row) {
      double value = 0.0;
      if (!parse_double(cell.get<std::string>(), value)) {
        throw std::runtime_error("bad coefficient in chain file: " + path);
      }
      c(i++) = value;
    }
    model.coefficients.push_back(std::move(c));
  }
  if (model.coefficients.size() != model.label_order.size()) {
    throw std::runtime_error("chain file position count mismatch: " + path);
  }
  return model;
}

}  // namespace mlrank
