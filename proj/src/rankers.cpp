#include "mlrank/rankers.hpp"

#include "mlrank/parallel.hpp"
#include "mlrank/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace mlrank {

namespace {

const std::vector<std::pair<std::string, RankMethod>>& method_table() {
  static const std::vector<std::pair<std::string, RankMethod>> table = {
      {"ising+score", RankMethod::ising_score},
      {"ising-inter+score", RankMethod::ising_inter_score},
      {"ising+l1", RankMethod::ising_l1},
      {"br-chi2", RankMethod::br_chi2},
      {"br-ig", RankMethod::br_ig},
      {"lp-chi2", RankMethod::lp_chi2},
      {"lp-ig", RankMethod::lp_ig},
  };
  return table;
}

std::vector<Index> descending_order(const Vector& importances) {
  std::vector<Index> order(static_cast<std::size_t>(importances.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (importances(a) != importances(b)) return importances(a) > importances(b);
    return a < b;  // ties keep ascending feature index
  });
  return order;
}

FeatureRanking finalize(Vector importances, RankMethod method, Matrix per_label) {
  FeatureRanking r;
  r.order = descending_order(importances);
  r.importances = std::move(importances);
  r.method = method_name(method);
  r.per_label_scores = std::move(per_label);
  return r;
}

std::vector<NullModelCache> build_all_caches(const Matrix& labels,
                                             const ScoreConfig& cfg, int threads) {
  std::vector<NullModelCache> caches(static_cast<std::size_t>(labels.cols()));
  parallel_for(caches.size(), threads, [&](std::size_t k) {
    caches[k] = build_null_cache(labels, static_cast<Index>(k), cfg);
  });
  return caches;
}

IntVector to_codes(const Eigen::Ref<const Vector>& column) {
  IntVector codes(column.size());
  for (Index i = 0; i < column.size(); ++i) {
    codes(i) = static_cast<int>(std::lround(column(i)));
  }
  return codes;
}

struct Contingency {
  std::vector<std::vector<long>> cells;
  std::vector<long> row_totals;  // feature codes
  std::vector<long> col_totals;  // target codes
  long total = 0;
};

Contingency tabulate(const IntVector& feature_codes, const IntVector& target_codes) {
  if (feature_codes.size() == 0) throw std::invalid_argument("empty input");
  if (feature_codes.size() != target_codes.size()) {
    throw std::invalid_argument("code vectors must have equal length");
  }
  int fmax = 0;
  int tmax = 0;
  for (Index i = 0; i < feature_codes.size(); ++i) {
    if (feature_codes(i) < 0 || target_codes(i) < 0) {
      throw std::invalid_argument("codes must be nonnegative");
    }
    fmax = std::max(fmax, feature_codes(i));
    tmax = std::max(tmax, target_codes(i));
  }
  Contingency t;
  t.cells.assign(static_cast<std::size_t>(fmax) + 1,
                 std::vector<long>(static_cast<std::size_t>(tmax) + 1, 0));
  t.row_totals.assign(static_cast<std::size_t>(fmax) + 1, 0);
  t.col_totals.assign(static_cast<std::size_t>(tmax) + 1, 0);
  for (Index i = 0; i < feature_codes.size(); ++i) {
    const auto f = static_cast<std::size_t>(feature_codes(i));
    const auto c = static_cast<std::size_t>(target_codes(i));
    ++t.cells[f][c];
    ++t.row_totals[f];
    ++t.col_totals[c];
    ++t.total;
  }
  return t;
}

double plugin_entropy(const std::vector<long>& counts, long total) {
  double h = 0.0;
  for (const long c : counts) {
    if (c == 0) continue;
    const double q = static_cast<double>(c) / static_cast<double>(total);
    h -= q * std::log(q);
  }
  return h;
}

double stat_value(RankStat stat, const IntVector& f, const IntVector& t) {
  return stat == RankStat::chi2 ? chi2_statistic(f, t) : info_gain(f, t);
}

}  // namespace

RankMethod parse_method(const std::string& name) {
  for (const auto& [key, value] : method_table()) {
    if (key == name) return value;
  }
  std::string msg = "unknown method '" + name + "'; valid methods:";
  for (const auto& [key, value] : method_table()) msg += " " + key;
  throw std::invalid_argument(msg);
}

std::string method_name(RankMethod method) {
  for (const auto& [key, value] : method_table()) {
    if (value == method) return key;
  }
  throw std::invalid_argument("unknown method value");
}

const std::vector<std::string>& method_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [key, value] : method_table()) out.push_back(key);
    return out;
  }();
  return names;
}

double chi2_statistic(const IntVector& feature_codes, const IntVector& target_codes) {
  const Contingency t = tabulate(feature_codes, target_codes);
  double chi2 = 0.0;
  for (std::size_t f = 0; f < t.cells.size(); ++f) {
    if (t.row_totals[f] == 0) continue;
    for (std::size_t c = 0; c < t.cells[f].size(); ++c) {
      if (t.col_totals[c] == 0) continue;
      const double expected = static_cast<double>(t.row_totals[f]) *
                              static_cast<double>(t.col_totals[c]) /
                              static_cast<double>(t.total);
      const double diff = static_cast<double>(t.cells[f][c]) - expected;
      chi2 += diff * diff / expected;
    }
  }
  return chi2;
}

double info_gain(const IntVector& feature_codes, const IntVector& target_codes) {
  const Contingency t = tabulate(feature_codes, target_codes);
  const double h_target = plugin_entropy(t.col_totals, t.total);
  double h_cond = 0.0;
  for (std::size_t f = 0; f < t.cells.size(); ++f) {
    if (t.row_totals[f] == 0) continue;
    h_cond += static_cast<double>(t.row_totals[f]) / static_cast<double>(t.total) *
              plugin_entropy(t.cells[f], t.row_totals[f]);
  }
  return h_target - h_cond;
}

ScoreResult inter_score_breakdown(const NullModelCache& cache,
                                  const Eigen::Ref<const Vector>& xj,
                                  const Matrix& labels) {
  const Index K = labels.cols();
  ScoreResult res;
  res.components.resize(K);  // plain term first, then one per other label
  Index c = 0;
  const ScoreResult plain = score_univariate(cache, xj);
  res.components(c++) = plain.value;
  res.collinear = plain.collinear;
  for (Index s = 0; s < K; ++s) {
    if (s == cache.label_index) continue;
    const Vector product = xj.array() * labels.col(s).array();
    const ScoreResult term = score_univariate(cache, product);
    res.components(c++) = term.value;
    res.collinear = res.collinear || term.collinear;
  }
  res.value = res.components.sum();
  return res;
}

FeatureRanking rank_ising_score(const MultiLabelDataset& ds, const RankerConfig& cfg) {
  const MultiLabelDataset data = cfg.standardize ? standardize(ds) : ds;
  const Index p = data.feature_count();
  const Index K = data.label_count();
  const int threads = resolve_threads(cfg.threads);
  const auto caches = build_all_caches(data.labels, cfg.score, threads);

  Matrix per_label(p, K);
  parallel_for(static_cast<std::size_t>(p), threads, [&](std::size_t j) {
    const auto col = data.features.col(static_cast<Index>(j));
    for (Index k = 0; k < K; ++k) {
      per_label(static_cast<Index>(j), k) =
          score_univariate(caches[static_cast<std::size_t>(k)], col).value;
    }
  });
  Vector importances = per_label.rowwise().sum();
  return finalize(std::move(importances), RankMethod::ising_score, std::move(per_label));
}

FeatureRanking rank_ising_inter_score(const MultiLabelDataset& ds,
                                      const RankerConfig& cfg) {
  const MultiLabelDataset data = cfg.standardize ? standardize(ds) : ds;
  const Index p = data.feature_count();
  const Index K = data.label_count();
  const int threads = resolve_threads(cfg.threads);
  const auto caches = build_all_caches(data.labels, cfg.score, threads);

  Matrix per_label(p, K);
  parallel_for(static_cast<std::size_t>(p), threads, [&](std::size_t j) {
    const auto col = data.features.col(static_cast<Index>(j));
    for (Index k = 0; k < K; ++k) {
      const auto& cache = caches[static_cast<std::size_t>(k)];
      if (cfg.joint_interactions) {
        Matrix m(data.rows(), K);
        Index c = 0;
        for (Index s = 0; s < K; ++s) {
          if (s == k) continue;
          m.col(c++) = col.array() * data.labels.col(s).array();
        }
        m.col(K - 1) = col;
        per_label(static_cast<Index>(j), k) = score_multivariate(cache, m).value;
      } else {
        per_label(static_cast<Index>(j), k) =
            inter_score_breakdown(cache, col, data.labels).value;
      }
    }
  });
  Vector importances = per_label.rowwise().sum();
  return finalize(std::move(importances), RankMethod::ising_inter_score,
                  std::move(per_label));
}

FeatureRanking rank_ising_l1(const MultiLabelDataset& ds, const RankerConfig& cfg) {
  if (cfg.lambda_factor <= 0.0) throw std::invalid_argument("lambda_factor must be > 0");
  const MultiLabelDataset data = cfg.standardize ? standardize(ds) : ds;
  const Index p = data.feature_count();
  const Index K = data.label_count();
  const int threads = resolve_threads(cfg.threads);

  Matrix per_label(p, K);
  parallel_for(static_cast<std::size_t>(K), threads, [&](std::size_t ks) {
    const Index k = static_cast<Index>(ks);
    Matrix design(data.rows(), K - 1 + p);
    Index c = 0;
    for (Index l = 0; l < K; ++l) {
      if (l == k) continue;
      design.col(c++) = data.labels.col(l);
    }
    design.rightCols(p) = data.features;
    const Vector response = data.labels.col(k);
    LogisticConfig lcfg = cfg.score.logistic;
    lcfg.intercept = false;
    const double lmax = lambda_max(design, response);
    const L1Fit fit = fit_l1(design, response, cfg.lambda_factor * lmax, lcfg);
    per_label.col(k) = fit.coefficients.tail(p).cwiseAbs();
  });
  Vector importances = per_label.rowwise().sum();
  return finalize(std::move(importances), RankMethod::ising_l1, std::move(per_label));
}

FeatureRanking rank_br(const MultiLabelDataset& ds, const RankerConfig& cfg,
                       RankStat stat) {
  auto [disc, map] = discretize(ds, cfg.bins);
  const Index p = disc.feature_count();
  const Index K = disc.label_count();
  const int threads = resolve_threads(cfg.threads);

  std::vector<IntVector> label_codes(static_cast<std::size_t>(K));
  for (Index k = 0; k < K; ++k) label_codes[static_cast<std::size_t>(k)] = to_codes(disc.labels.col(k));

  Matrix per_label(p, K);
  parallel_for(static_cast<std::size_t>(p), threads, [&](std::size_t j) {
    const IntVector codes = to_codes(disc.features.col(static_cast<Index>(j)));
    for (Index k = 0; k < K; ++k) {
      per_label(static_cast<Index>(j), k) =
          stat_value(stat, codes, label_codes[static_cast<std::size_t>(k)]);
    }
  });
  const RankMethod method = stat == RankStat::chi2 ? RankMethod::br_chi2 : RankMethod::br_ig;
  Vector importances = per_label.rowwise().sum();
  return finalize(std::move(importances), method, std::move(per_label));
}

FeatureRanking rank_lp(const MultiLabelDataset& ds, const RankerConfig& cfg,
                       RankStat stat) {
  auto [disc, map] = discretize(ds, cfg.bins);
  const Index n = disc.rows();
  const Index p = disc.feature_count();
  const int threads = resolve_threads(cfg.threads);

  // meta-class id per row: one class per distinct label combination,
  // numbered by first appearance
  std::map<std::vector<int>, int> ids;
  std::vector<int> meta(static_cast<std::size_t>(n));
  std::vector<long> class_counts;
  for (Index i = 0; i < n; ++i) {
    std::vector<int> key(static_cast<std::size_t>(disc.label_count()));
    for (Index k = 0; k < disc.label_count(); ++k) {
      key[static_cast<std::size_t>(k)] = static_cast<int>(disc.labels(i, k));
    }
    auto [it, inserted] = ids.try_emplace(key, static_cast<int>(ids.size()));
    if (inserted) class_counts.push_back(0);
    meta[static_cast<std::size_t>(i)] = it->second;
    ++class_counts[static_cast<std::size_t>(it->second)];
  }

  // tau pruning: rows whose combination occurs fewer than tau times are
  // dropped from the contingency tables
  std::vector<Index> kept;
  kept.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    if (cfg.lp_min_count <= 0 ||
        class_counts[static_cast<std::size_t>(meta[static_cast<std::size_t>(i)])] >=
            cfg.lp_min_count) {
      kept.push_back(i);
    }
  }

  const RankMethod method = stat == RankStat::chi2 ? RankMethod::lp_chi2 : RankMethod::lp_ig;
  Vector importances = Vector::Zero(p);
  if (!kept.empty()) {
    IntVector target(static_cast<Index>(kept.size()));
    for (std::size_t i = 0; i < kept.size(); ++i) {
      target(static_cast<Index>(i)) = meta[static_cast<std::size_t>(kept[i])];
    }
    parallel_for(static_cast<std::size_t>(p), threads, [&](std::size_t j) {
      IntVector codes(static_cast<Index>(kept.size()));
      for (std::size_t i = 0; i < kept.size(); ++i) {
        codes(static_cast<Index>(i)) =
            static_cast<int>(disc.features(kept[i], static_cast<Index>(j)));
      }
      importances(static_cast<Index>(j)) = stat_value(stat, codes, target);
    });
  }
  return finalize(std::move(importances), method, Matrix());
}

FeatureRanking rank_features(const MultiLabelDataset& ds, const RankerConfig& cfg) {
  if (cfg.bins < 2) throw std::invalid_argument("bins must be >= 2");
  switch (cfg.method) {
    case RankMethod::ising_score: return rank_ising_score(ds, cfg);
    case RankMethod::ising_inter_score: return rank_ising_inter_score(ds, cfg);
    case RankMethod::ising_l1: return rank_ising_l1(ds, cfg);
    case RankMethod::br_chi2: return rank_br(ds, cfg, RankStat::chi2);
    case RankMethod::br_ig: return rank_br(ds, cfg, RankStat::ig);
    case RankMethod::lp_chi2: return rank_lp(ds, cfg, RankStat::chi2);
    case RankMethod::lp_ig: return rank_lp(ds, cfg, RankStat::ig);
  }
  throw std::invalid_argument("unknown method value");
}

void write_ranking_csv(const FeatureRanking& ranking,
                       const std::vector<std::string>& feature_names,
                       const std::string& path) {
  const std::size_t p = ranking.order.size();
  if (feature_names.size() != p) {
    throw std::invalid_argument("feature name count must match ranking length");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  std::string buf = "rank,feature_index,feature_name,importance\n";
  for (std::size_t r = 0; r < p; ++r) {
    const Index j = ranking.order[r];
    buf += std::to_string(r + 1);
    buf += ',';
    buf += std::to_string(j + 1);
    buf += ',';
    buf += feature_names[static_cast<std::size_t>(j)];
    buf += ',';
    buf += format_double(ranking.importances(j));
    buf += '\n';
  }
  out << buf;
  if (!out) throw std::runtime_error("failed writing: " + path);
}

FeatureRanking load_ranking_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty ranking file", 1, 1);

  struct Row {
    long rank;
    Index feature;
    double importance;
  };
  std::vector<Row> rows;
  long line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 4) throw ParseError("expected 4 columns", line_no, 1);
    Row row{};
    double rank_val = 0.0;
    double feature_val = 0.0;
    if (!parse_double(trim(cells[0]), rank_val)) throw ParseError("bad rank", line_no, 1);
    if (!parse_double(trim(cells[1]), feature_val)) throw ParseError("bad feature index", line_no, 2);
    if (!parse_double(trim(cells[3]), row.importance)) throw ParseError("bad importance", line_no, 4);
    row.rank = static_cast<long>(rank_val);
    row.feature = static_cast<Index>(feature_val) - 1;  // file is 1-based
    rows.push_back(row);
  }
  if (rows.empty()) throw ParseError("ranking file has no rows", 1, 1);

  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.rank < b.rank; });
  const Index p = static_cast<Index>(rows.size());
  FeatureRanking ranking;
  ranking.importances = Vector::Zero(p);
  std::vector<bool> seen(static_cast<std::size_t>(p), false);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Row& row = rows[r];
    if (row.rank != static_cast<long>(r + 1)) {
      throw ParseError("ranks must be 1..p without gaps", static_cast<long>(r + 2), 1);
    }
    if (row.feature < 0 || row.feature >= p || seen[static_cast<std::size_t>(row.feature)]) {
      throw ParseError("feature indices must form a permutation of 1..p",
                       static_cast<long>(r + 2), 2);
    }
    seen[static_cast<std::size_t>(row.feature)] = true;
    ranking.order.push_back(row.feature);
    ranking.importances(row.feature) = row.importance;
  }
  return ranking;
}

}  // namespace mlrank
