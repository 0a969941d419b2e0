#include "mlrank/dataset.hpp"

#include "mlrank/rng.hpp"
#include "mlrank/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace mlrank {

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  // strip a UTF-8 BOM if present
  if (!lines.empty() && lines[0].rfind("\xEF\xBB\xBF", 0) == 0) {
    lines[0].erase(0, 3);
  }
  // drop trailing blank lines only; a blank line inside the data is an error
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

}  // namespace

void validate(const MultiLabelDataset& ds) {
  require(ds.features.rows() >= 1, "dataset must have at least one row");
  require(ds.features.rows() == ds.labels.rows(),
          "features and labels must have the same row count");
  require(ds.features.cols() >= 1, "dataset must have at least one feature");
  require(ds.labels.cols() >= 2,
          "dataset must have at least two labels (each label is conditioned on the others)");
  require(ds.feature_names.size() == static_cast<std::size_t>(ds.features.cols()),
          "feature name count must match feature columns");
  require(ds.label_names.size() == static_cast<std::size_t>(ds.labels.cols()),
          "label name count must match label columns");
  require(ds.features.allFinite(), "features must be finite");
  for (Index i = 0; i < ds.labels.rows(); ++i) {
    for (Index k = 0; k < ds.labels.cols(); ++k) {
      const double v = ds.labels(i, k);
      require(v == 0.0 || v == 1.0, "labels must be exactly 0 or 1");
    }
  }
}

MultiLabelDataset load_csv(const std::string& path, Index label_count,
                           const CsvOptions& opts) {
  require(label_count >= 1, "label_count must be >= 1");
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw ParseError("empty file", 1, 1);

  const std::size_t first_data = opts.has_header ? 1 : 0;
  if (lines.size() <= first_data) throw ParseError("no data rows", 1, 1);

  const auto first_cells = split_csv_line(lines[first_data]);
  const Index total_cols = static_cast<Index>(first_cells.size());
  if (total_cols <= label_count) {
    throw ParseError("need at least one feature column besides the labels",
                     static_cast<long>(first_data + 1), 1);
  }
  const Index p = total_cols - label_count;
  const Index n = static_cast<Index>(lines.size() - first_data);
  const Index label_base = opts.labels_first ? 0 : p;

  MultiLabelDataset ds;
  ds.features.resize(n, p);
  ds.labels.resize(n, label_count);

  for (Index i = 0; i < n; ++i) {
    const long file_line = static_cast<long>(first_data + i + 1);
    const auto cells = split_csv_line(lines[first_data + i]);
    if (static_cast<Index>(cells.size()) != total_cols) {
      throw ParseError("expected " + std::to_string(total_cols) + " columns, got " +
                           std::to_string(cells.size()),
                       file_line, 1);
    }
    for (Index c = 0; c < total_cols; ++c) {
      const std::string_view cell = trim(cells[static_cast<std::size_t>(c)]);
      const long file_col = static_cast<long>(c + 1);
      if (c >= label_base && c < label_base + label_count) {
        if (cell == "0") {
          ds.labels(i, c - label_base) = 0.0;
        } else if (cell == "1") {
          ds.labels(i, c - label_base) = 1.0;
        } else {
          throw ParseError("label value must be literal 0 or 1, got '" +
                               std::string(cell) + "'",
                           file_line, file_col);
        }
      } else {
        double v = 0.0;
        if (!parse_double(cell, v)) {
          throw ParseError("cannot parse feature value '" + std::string(cell) + "'",
                           file_line, file_col);
        }
        ds.features(i, opts.labels_first ? c - label_count : c) = v;
      }
    }
  }

  if (opts.has_header) {
    const auto header = split_csv_line(lines[0]);
    if (static_cast<Index>(header.size()) != total_cols) {
      throw ParseError("header column count differs from data", 1, 1);
    }
    for (Index c = 0; c < total_cols; ++c) {
      const std::string name(trim(header[static_cast<std::size_t>(c)]));
      if (c >= label_base && c < label_base + label_count) {
        ds.label_names.push_back(name);
      } else {
        ds.feature_names.push_back(name);
      }
    }
  } else {
    for (Index j = 0; j < p; ++j) ds.feature_names.push_back("x" + std::to_string(j + 1));
    for (Index k = 0; k < label_count; ++k) ds.label_names.push_back("y" + std::to_string(k + 1));
  }

  validate(ds);
  return ds;
}

void write_csv(const MultiLabelDataset& ds, const std::string& path,
               const CsvOptions& opts) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  std::string buf;
  const Index n = ds.rows();
  const Index p = ds.feature_count();
  const Index K = ds.label_count();

  const auto emit_row = [&](auto&& feature_cell, auto&& label_cell) {
    bool first = true;
    const auto put = [&](const std::string& cell) {
      if (!first) buf += ',';
      buf += cell;
      first = false;
    };
    if (opts.labels_first) {
      for (Index k = 0; k < K; ++k) put(label_cell(k));
      for (Index j = 0; j < p; ++j) put(feature_cell(j));
    } else {
      for (Index j = 0; j < p; ++j) put(feature_cell(j));
      for (Index k = 0; k < K; ++k) put(label_cell(k));
    }
    buf += '\n';
  };

  if (opts.has_header) {
    emit_row([&](Index j) { return ds.feature_names[static_cast<std::size_t>(j)]; },
             [&](Index k) { return ds.label_names[static_cast<std::size_t>(k)]; });
  }
  for (Index i = 0; i < n; ++i) {
    emit_row([&](Index j) { return format_double(ds.features(i, j)); },
             [&](Index k) { return std::string(ds.labels(i, k) == 1.0 ? "1" : "0"); });
  }
  out << buf;
  if (!out) throw std::runtime_error("failed writing: " + path);
}

DataSplit split(const MultiLabelDataset& ds, double train_frac, double val_frac,
                std::uint64_t seed) {
  require(train_frac > 0.0 && train_frac < 1.0, "train_frac must be in (0,1)");
  require(val_frac >= 0.0 && val_frac < 1.0, "val_frac must be in [0,1)");
  require(train_frac + val_frac <= 1.0, "train_frac + val_frac must be <= 1");

  const Index n = ds.rows();
  Index train_size = static_cast<Index>(std::llround(train_frac * static_cast<double>(n)));
  train_size = std::clamp<Index>(train_size, 1, n);
  Index val_size = static_cast<Index>(std::llround(val_frac * static_cast<double>(n)));
  val_size = std::clamp<Index>(val_size, 0, n - train_size);

  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  RandomStream rng(seed);
  rng.shuffle(idx);

  DataSplit out;
  out.train_idx.assign(idx.begin(), idx.begin() + train_size);
  out.val_idx.assign(idx.begin() + train_size, idx.begin() + train_size + val_size);
  out.test_idx.assign(idx.begin() + train_size + val_size, idx.end());
  std::sort(out.train_idx.begin(), out.train_idx.end());
  std::sort(out.val_idx.begin(), out.val_idx.end());
  std::sort(out.test_idx.begin(), out.test_idx.end());
  return out;
}

MultiLabelDataset subset_rows(const MultiLabelDataset& ds,
                              const std::vector<Index>& idx) {
  MultiLabelDataset out;
  out.features.resize(static_cast<Index>(idx.size()), ds.feature_count());
  out.labels.resize(static_cast<Index>(idx.size()), ds.label_count());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    require(idx[i] >= 0 && idx[i] < ds.rows(), "row index out of range");
    out.features.row(static_cast<Index>(i)) = ds.features.row(idx[i]);
    out.labels.row(static_cast<Index>(i)) = ds.labels.row(idx[i]);
  }
  out.feature_names = ds.feature_names;
  out.label_names = ds.label_names;
  return out;
}

int DiscretizationMap::code(Index feature, double x) const {
  const auto& b = boundaries[static_cast<std::size_t>(feature)];
  return static_cast<int>(std::lower_bound(b.begin(), b.end(), x) - b.begin());
}

std::pair<MultiLabelDataset, DiscretizationMap> discretize(
    const MultiLabelDataset& ds, int bins) {
  require(bins >= 2, "bins must be >= 2");
  const Index n = ds.rows();
  const Index p = ds.feature_count();

  DiscretizationMap map;
  map.bins = bins;
  map.boundaries.resize(static_cast<std::size_t>(p));

  MultiLabelDataset out = ds;
  std::vector<double> sorted(static_cast<std::size_t>(n));
  for (Index j = 0; j < p; ++j) {
    for (Index i = 0; i < n; ++i) sorted[static_cast<std::size_t>(i)] = ds.features(i, j);
    std::sort(sorted.begin(), sorted.end());

    // quantile boundaries at q = i/bins, linearly interpolated on the order
    // statistics; duplicates collapse so ties stay in one bin
    auto& b = map.boundaries[static_cast<std::size_t>(j)];
    for (int q = 1; q < bins; ++q) {
      const double h = (static_cast<double>(n) - 1.0) * static_cast<double>(q) /
                       static_cast<double>(bins);
      const auto lo = static_cast<std::size_t>(std::floor(h));
      const double frac = h - std::floor(h);
      double boundary = sorted[lo];
      if (frac > 0.0 && lo + 1 < sorted.size()) {
        boundary += frac * (sorted[lo + 1] - sorted[lo]);
      }
      if (b.empty() || boundary > b.back()) b.push_back(boundary);
    }
    for (Index i = 0; i < n; ++i) {
      out.features(i, j) = static_cast<double>(map.code(j, ds.features(i, j)));
    }
  }
  return {std::move(out), std::move(map)};
}

MultiLabelDataset standardize(const MultiLabelDataset& ds) {
  MultiLabelDataset out = ds;
  const Index n = ds.rows();
  for (Index j = 0; j < ds.feature_count(); ++j) {
    const auto col = ds.features.col(j);
    const bool constant = (col.array() == col(0)).all();
    if (constant) {
      out.features.col(j).setZero();
      continue;
    }
    const double mean = col.mean();
    const double sd = std::sqrt((col.array() - mean).square().sum() /
                                static_cast<double>(n));
    out.features.col(j) = (col.array() - mean) / sd;
  }
  return out;
}

}  // namespace mlrank
