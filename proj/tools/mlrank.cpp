#include "mlrank/chains.hpp"
#include "mlrank/dataset.hpp"
#include "mlrank/evaluation.hpp"
#include "mlrank/parallel.hpp"
#include "mlrank/rankers.hpp"
#include "mlrank/synth.hpp"
#include "mlrank/types.hpp"

#include "mlrank/text.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace mlrank;

namespace {

std::string join_path(const std::string& dir, const char* name) {
  return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  fs::create_directories(dir);
}

// Sidecar listing the relevant features, one 1-based index per line.
void write_relevant(const std::vector<Index>& relevant, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  for (const Index j : relevant) out << (j + 1) << '\n';
  if (!out) throw std::runtime_error("failed writing: " + path);
}

std::vector<Index> read_relevant(const std::string& path, Index feature_count) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::vector<Index> relevant;
  long value = 0;
  while (in >> value) {
    if (value < 1 || value > feature_count) {
      throw std::runtime_error("relevant index out of range in " + path);
    }
    relevant.push_back(static_cast<Index>(value) - 1);
  }
  if (!in.eof()) throw std::runtime_error("non-numeric entry in " + path);
  if (relevant.empty()) throw std::runtime_error("no relevant indices in " + path);
  return relevant;
}

void write_lines(const std::vector<Index>& values, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  for (const Index v : values) out << (v + 1) << '\n';
  if (!out) throw std::runtime_error("failed writing: " + path);
}

struct DataArgs {
  std::string path;
  Index label_count = 0;
  bool labels_first = false;
  bool no_header = false;

  MultiLabelDataset load() const {
    CsvOptions opts;
    opts.has_header = !no_header;
    opts.labels_first = labels_first;
    return load_csv(path, label_count, opts);
  }
};

void add_data_options(CLI::App& cmd, DataArgs& args) {
  cmd.add_option("--data", args.path, "input dataset CSV")->required();
  cmd.add_option("--labels", args.label_count, "number of label columns")
      ->required()
      ->check(CLI::PositiveNumber);
  cmd.add_flag("--labels-first", args.labels_first,
               "labels occupy the leading columns instead of the trailing ones");
  cmd.add_flag("--no-header", args.no_header, "dataset CSV has no header row");
}

int run(int argc, char** argv) {
  CLI::App app("multi-label feature ranking and selection");
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate a synthetic dataset");
  ScenarioSpec spec;
  std::string sim_out;
  sim->add_option("--scenario", spec.scenario, "data generating scenario")
      ->required()
      ->check(CLI::IsMember({"artdata1", "artdata2", "artdata3", "artdata4", "xor"}));
  sim->add_option("--out", sim_out, "output directory")->required();
  sim->add_option("--seed", spec.seed, "master seed");
  sim->add_option("--n", spec.n, "rows (0 = scenario default)");
  sim->add_option("--p", spec.p, "features (0 = scenario default)");
  sim->add_option("--k", spec.K, "labels (0 = scenario default)");
  sim->add_option("--sweeps", spec.gibbs_sweeps, "Gibbs sweeps per row")
      ->check(CLI::NonNegativeNumber);
  sim->add_option("--noise-features", spec.noise_features,
                  "noise feature count (xor scenario)");

  // rank
  auto* rank = app.add_subcommand("rank", "rank features by importance");
  DataArgs rank_data;
  add_data_options(*rank, rank_data);
  std::string method_name_arg = "ising+score";
  std::string rank_out;
  RankerConfig rcfg;
  bool no_standardize = false;
  rank->add_option("--method", method_name_arg, "ranking method")
      ->check(CLI::IsMember(method_names()));
  rank->add_option("--out", rank_out, "output ranking CSV")->required();
  rank->add_option("--bins", rcfg.bins, "discretization bins for chi2/ig methods")
      ->check(CLI::Range(2, 1000));
  rank->add_option("--lambda-factor", rcfg.lambda_factor,
                   "penalty as a fraction of the per-label maximum");
  rank->add_option("--tau", rcfg.lp_min_count,
                   "drop label combinations occurring fewer than this many times")
      ->check(CLI::NonNegativeNumber);
  rank->add_flag("--no-standardize", no_standardize,
                 "skip feature standardization in the model-based methods");
  rank->add_flag("--joint-interactions", rcfg.joint_interactions,
                 "one multivariate statistic per label instead of the per-interaction sum");
  rank->add_option("--threads", rcfg.threads,
                   "worker threads (0 = MLRANK_THREADS or hardware)");

  // select
  auto* sel = app.add_subcommand("select", "pick a feature subset from a ranking");
  DataArgs sel_data;
  add_data_options(*sel, sel_data);
  std::string sel_ranking, sel_out;
  double budget_frac = 0.2;
  double val_frac = 0.3;
  std::uint64_t sel_seed = 1;
  int sel_threads = 0;
  sel->add_option("--ranking", sel_ranking, "ranking CSV from the rank step")->required();
  sel->add_option("--out", sel_out, "output directory")->required();
  sel->add_option("--budget-frac", budget_frac, "largest prefix as a fraction of p");
  sel->add_option("--val-frac", val_frac, "fraction of rows held out for validation");
  sel->add_option("--seed", sel_seed, "split seed");
  sel->add_option("--threads", sel_threads, "worker threads (0 = MLRANK_THREADS or hardware)");

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "score a ranking or a trained model");
  std::string ev_mode;
  std::vector<std::string> ev_rankings;
  std::string ev_relevant, ev_model, ev_out;
  DataArgs ev_data;
  ev->add_option("--mode", ev_mode, "ranking or classify")
      ->required()
      ->check(CLI::IsMember({"ranking", "classify"}));
  ev->add_option("--ranking", ev_rankings, "ranking CSV (repeat for several seeds)");
  ev->add_option("--relevant", ev_relevant, "relevant-feature sidecar (ranking mode)");
  ev->add_option("--model", ev_model, "chain model JSON (classify mode)");
  ev->add_option("--data", ev_data.path, "test dataset CSV (classify mode)");
  ev->add_option("--labels", ev_data.label_count, "number of label columns")
      ->check(CLI::PositiveNumber);
  ev->add_flag("--labels-first", ev_data.labels_first,
               "labels occupy the leading columns instead of the trailing ones");
  ev->add_flag("--no-header", ev_data.no_header, "dataset CSV has no header row");
  ev->add_option("--out", ev_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the error message
    return code == 0 ? 0 : 2;
  }

  if (sim->parsed()) {
    const SynthResult result = make_artdata(spec);
    ensure_dir(sim_out);
    write_csv(result.data, join_path(sim_out, "data.csv"));
    write_relevant(result.relevant, join_path(sim_out, "relevant.txt"));
    std::cout << "wrote " << join_path(sim_out, "data.csv") << ": "
              << result.data.rows() << " rows, " << result.data.feature_count()
              << " features, " << result.data.label_count() << " labels\n"
              << "wrote " << join_path(sim_out, "relevant.txt") << ": "
              << result.relevant.size() << " relevant features\n";
    return 0;
  }

  if (rank->parsed()) {
    rcfg.method = parse_method(method_name_arg);
    rcfg.standardize = !no_standardize;
    const MultiLabelDataset ds = rank_data.load();
    const FeatureRanking ranking = rank_features(ds, rcfg);
    if (const fs::path parent = fs::path(rank_out).parent_path(); !parent.empty()) {
      fs::create_directories(parent);
    }
    write_ranking_csv(ranking, ds.feature_names, rank_out);
    std::cout << "wrote " << rank_out << ": " << ranking.order.size()
              << " features ranked by " << ranking.method << '\n';
    return 0;
  }

  if (sel->parsed()) {
    const MultiLabelDataset ds = sel_data.load();
    const FeatureRanking ranking = load_ranking_csv(sel_ranking);
    if (static_cast<Index>(ranking.order.size()) != ds.feature_count()) {
      throw std::runtime_error("ranking covers " + std::to_string(ranking.order.size()) +
                               " features but the dataset has " +
                               std::to_string(ds.feature_count()));
    }
    const SelectionResult result =
        select_features(ds, ranking, budget_frac, val_frac, sel_seed, {}, sel_threads);

    std::vector<Index> label_order(static_cast<std::size_t>(ds.label_count()));
    std::iota(label_order.begin(), label_order.end(), Index{0});
    const ChainModel model = train_chain(ds, result.chosen_subset, label_order);

    ensure_dir(sel_out);
    write_selection_csv(result, join_path(sel_out, "selection.csv"));
    save_chain(model, join_path(sel_out, "model.json"));
    write_lines(result.chosen_subset, join_path(sel_out, "chosen.txt"));
    std::cout << "chose " << result.chosen_subset.size() << " of " << result.budget
              << " candidate features; wrote " << join_path(sel_out, "selection.csv")
              << ", " << join_path(sel_out, "model.json") << ", "
              << join_path(sel_out, "chosen.txt") << '\n';
    return 0;
  }

  // evaluate
  if (ev_mode == "ranking") {
    if (ev_rankings.empty() || ev_relevant.empty()) {
      std::cerr << "evaluate --mode ranking needs --ranking and --relevant\n";
      return 2;
    }
    ensure_dir(ev_out);
    std::vector<RocCurve> curves;
    std::vector<std::string> sources;
    for (const std::string& path : ev_rankings) {
      const FeatureRanking ranking = load_ranking_csv(path);
      const std::vector<Index> relevant =
          read_relevant(ev_relevant, static_cast<Index>(ranking.order.size()));
      curves.push_back(ranking_roc(ranking, relevant));
      sources.push_back(fs::path(path).stem().string());
    }
    write_roc_csv(sources, curves, join_path(ev_out, "roc.csv"));
    write_auc_csv(sources, curves, join_path(ev_out, "auc.csv"));
    double mean = 0.0;
    for (const RocCurve& c : curves) mean += c.auc;
    mean /= static_cast<double>(curves.size());
    std::cout << "wrote " << join_path(ev_out, "roc.csv") << " and "
              << join_path(ev_out, "auc.csv") << "; mean AUC "
              << format_double(mean) << " over " << curves.size() << " ranking(s)\n";
    return 0;
  }

  if (ev_model.empty() || ev_data.path.empty() || ev_data.label_count < 1) {
    std::cerr << "evaluate --mode classify needs --model, --data and --labels\n";
    return 2;
  }
  ensure_dir(ev_out);
  const MultiLabelDataset ds = ev_data.load();
  const ChainModel model = load_chain(ev_model);
  if (static_cast<Index>(model.label_order.size()) != ds.label_count()) {
    throw std::runtime_error("model predicts " + std::to_string(model.label_order.size()) +
                             " labels but the dataset has " +
                             std::to_string(ds.label_count()));
  }
  Matrix features(ds.rows(), static_cast<Index>(model.feature_subset.size()));
  for (std::size_t j = 0; j < model.feature_subset.size(); ++j) {
    const Index col = model.feature_subset[j];
    if (col < 0 || col >= ds.feature_count()) {
      throw std::runtime_error("model refers to feature " + std::to_string(col + 1) +
                               " outside the dataset");
    }
    features.col(static_cast<Index>(j)) = ds.features.col(col);
  }
  const Matrix pred = predict_chain(model, features);
  const MetricsReport report = classification_metrics(ds.labels, pred);
  write_metrics_csv(report, join_path(ev_out, "metrics.csv"));
  std::cout << "wrote " << join_path(ev_out, "metrics.csv") << ": subset_accuracy "
            << format_double(report.subset_accuracy) << ", hamming "
            << format_double(report.hamming) << ", jaccard "
            << format_double(report.jaccard) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
