#include "mlrank/evaluation.hpp"

#include "mlrank/parallel.hpp"
#include "mlrank/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace mlrank {

RocCurve ranking_roc(const FeatureRanking& ranking,
                     const std::vector<Index>& relevant) {
  const std::size_t p = ranking.order.size();
  if (p == 0) throw std::invalid_argument("empty ranking");
  std::vector<bool> is_relevant(p, false);
  for (const Index j : relevant) {
    if (j < 0 || j >= static_cast<Index>(p)) {
      throw std::invalid_argument("relevant index out of range");
    }
    if (is_relevant[static_cast<std::size_t>(j)]) {
      throw std::invalid_argument("relevant indices must be distinct");
    }
    is_relevant[static_cast<std::size_t>(j)] = true;
  }
  const long long r = static_cast<long long>(relevant.size());
  const long long c = static_cast<long long>(p) - r;
  if (r == 0 || c == 0) {
    throw std::invalid_argument("ROC needs both relevant and irrelevant features");
  }

  RocCurve curve;
  curve.fpr.reserve(p);
  curve.tpr.reserve(p);
  long long tp = 0, fp = 0, numerator = 0;
  for (std::size_t k = 0; k < p; ++k) {
    const long long tp_prev = tp;
    const long long fp_prev = fp;
    if (is_relevant[static_cast<std::size_t>(ranking.order[k])]) {
      ++tp;
    } else {
      ++fp;
    }
    // trapezoid area accumulated in counts: exact for perfect orderings
    numerator += (fp - fp_prev) * (tp + tp_prev);
    curve.tpr.push_back(static_cast<double>(tp) / static_cast<double>(r));
    curve.fpr.push_back(static_cast<double>(fp) / static_cast<double>(c));
  }
  curve.auc = static_cast<double>(numerator) / (2.0 * static_cast<double>(r) * static_cast<double>(c));
  return curve;
}

MetricsReport classification_metrics(const Matrix& y_true, const Matrix& y_pred) {
  const Index n = y_true.rows();
  const Index K = y_true.cols();
  if (n < 1 || K < 1) throw std::invalid_argument("empty label matrix");
  if (y_pred.rows() != n || y_pred.cols() != K) {
    throw std::invalid_argument("prediction shape mismatch");
  }
  long exact = 0;
  long agree = 0;
  double jaccard_sum = 0.0;
  for (Index i = 0; i < n; ++i) {
    long row_agree = 0;
    long both = 0;
    long either = 0;
    for (Index k = 0; k < K; ++k) {
      const bool t = y_true(i, k) != 0.0;
      const bool q = y_pred(i, k) != 0.0;
      if (t == q) ++row_agree;
      if (t && q) ++both;
      if (t || q) ++either;
    }
    if (row_agree == K) ++exact;
    agree += row_agree;
    jaccard_sum += either == 0 ? 1.0 : static_cast<double>(both) / static_cast<double>(either);
  }
  MetricsReport rep;
  rep.subset_accuracy = static_cast<double>(exact) / static_cast<double>(n);
  rep.hamming = static_cast<double>(agree) / static_cast<double>(n * K);
  rep.jaccard = jaccard_sum / static_cast<double>(n);
  return rep;
}

SelectionResult select_features(const MultiLabelDataset& ds,
                                const FeatureRanking& ranking,
                                double budget_frac, double val_frac,
                                std::uint64_t seed, const ChainConfig& chain_cfg,
                                int threads) {
  const Index p = ds.feature_count();
  if (static_cast<Index>(ranking.order.size()) != p) {
    throw std::invalid_argument("ranking length must match feature count");
  }
  if (!(budget_frac > 0.0 && budget_frac <= 1.0)) {
    throw std::invalid_argument("budget_frac must be in (0, 1]");
  }
  if (!(val_frac > 0.0 && val_frac < 1.0)) {
    throw std::invalid_argument("val_frac must be in (0, 1)");
  }
  const Index budget = std::min<Index>(
      p, static_cast<Index>(std::ceil(budget_frac * static_cast<double>(p))));

  const DataSplit parts = split(ds, 1.0 - val_frac, val_frac, seed);
  if (parts.train_idx.empty() || parts.val_idx.empty()) {
    throw std::invalid_argument("split leaves an empty fit or validation part");
  }
  const MultiLabelDataset fit_part = subset_rows(ds, parts.train_idx);
  const MultiLabelDataset val_part = subset_rows(ds, parts.val_idx);

  std::vector<Index> label_order(static_cast<std::size_t>(ds.label_count()));
  std::iota(label_order.begin(), label_order.end(), Index{0});

  SelectionResult result;
  result.budget = budget;
  result.prefix_scores = Vector::Zero(budget);
  parallel_for(static_cast<std::size_t>(budget), resolve_threads(threads),
               [&](std::size_t m) {
                 const std::vector<Index> subset(
                     ranking.order.begin(),
                     ranking.order.begin() + static_cast<std::ptrdiff_t>(m + 1));
                 const ChainModel model =
                     train_chain(fit_part, subset, label_order, chain_cfg);
                 Matrix val_features(val_part.rows(),
                                     static_cast<Index>(subset.size()));
                 for (std::size_t j = 0; j < subset.size(); ++j) {
                   val_features.col(static_cast<Index>(j)) =
                       val_part.features.col(subset[j]);
                 }
                 const Matrix pred = predict_chain(model, val_features);
                 result.prefix_scores(static_cast<Index>(m)) =
                     classification_metrics(val_part.labels, pred).subset_accuracy;
               });

  Index best = 0;
  for (Index m = 1; m < budget; ++m) {
    if (result.prefix_scores(m) > result.prefix_scores(best)) best = m;
  }
  result.chosen_subset.assign(ranking.order.begin(),
                              ranking.order.begin() + best + 1);
  return result;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  return out;
}

void check_curves(const std::vector<std::string>& sources,
                  const std::vector<RocCurve>& curves) {
  if (sources.size() != curves.size() || curves.empty()) {
    throw std::invalid_argument("need one source name per curve");
  }
  for (const RocCurve& c : curves) {
    if (c.fpr.size() != c.tpr.size() || c.fpr.empty()) {
      throw std::invalid_argument("malformed ROC curve");
    }
    if (c.fpr.size() != curves.front().fpr.size()) {
      throw std::invalid_argument("curves must have equal length");
    }
  }
}

}  // namespace

void write_roc_csv(const std::vector<std::string>& sources,
                   const std::vector<RocCurve>& curves, const std::string& path) {
  check_curves(sources, curves);
  const std::size_t len = curves.front().fpr.size();
  auto out = open_out(path);
  std::string buf = "source,k,fpr,tpr\n";
  for (std::size_t s = 0; s < curves.size(); ++s) {
    for (std::size_t k = 0; k < len; ++k) {
      buf += sources[s];
      buf += ',';
      buf += std::to_string(k + 1);
      buf += ',';
      buf += format_double(curves[s].fpr[k]);
      buf += ',';
      buf += format_double(curves[s].tpr[k]);
      buf += '\n';
    }
  }
  for (std::size_t k = 0; k < len; ++k) {
    double mf = 0.0, mt = 0.0;
    for (const RocCurve& c : curves) {
      mf += c.fpr[k];
      mt += c.tpr[k];
    }
    mf /= static_cast<double>(curves.size());
    mt /= static_cast<double>(curves.size());
    buf += "mean,";
    buf += std::to_string(k + 1);
    buf += ',';
    buf += format_double(mf);
    buf += ',';
    buf += format_double(mt);
    buf += '\n';
  }
  out << buf;
  if (!out) throw std::runtime_error("failed writing: " + path);
}

void write_auc_csv(const std::vector<std::string>& sources,
                   const std::vector<RocCurve>& curves, const std::string& path) {
  check_curves(sources, curves);
  auto out = open_out(path);
  std::string buf = "source,auc\n";
  double mean = 0.0;
  for (std::size_t s = 0; s < curves.size(); ++s) {
    buf += sources[s];
    buf += ',';
    buf += format_double(curves[s].auc);
    buf += '\n';
    mean += curves[s].auc;
  }
  buf += "mean,";
  buf += format_double(mean / static_cast<double>(curves.size()));
  buf += '\n';
  out << buf;
  if (!out) throw std::runtime_error("failed writing: " + path);
}

void write_metrics_csv(const MetricsReport& report, const std::string& path) {
  auto out = open_out(path);
  std::string buf = "metric,value\n";
  buf += "subset_accuracy," + format_double(report.subset_accuracy) + '\n';
  buf += "hamming," + format_double(report.hamming) + '\n';
  buf += "jaccard," + format_double(report.jaccard) + '\n';
  out << buf;
  if (!out) throw std::runtime_error("failed writing: " + path);
}

void write_selection_csv(const SelectionResult& result, const std::string& path) {
  auto out = open_out(path);
  std::string buf = "prefix_size,subset_accuracy,chosen\n";
  const Index chosen = static_cast<Index>(result.chosen_subset.size());
  for (Index m = 0; m < result.budget; ++m) {
    buf += std::to_string(m + 1);
    buf += ',';
    buf += format_double(result.prefix_scores(m));
    buf += ',';
    buf += (m + 1 == chosen) ? '1' : '0';
    buf += '\n';
  }
  out << buf;
  if (!out) throw std::runtime_error("failed writing: " + path);
}

}  // namespace mlrank
