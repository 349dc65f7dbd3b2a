#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "imgrank/classify.hpp"
#include "imgrank/combine.hpp"
#include "imgrank/config.hpp"
#include "imgrank/dataset.hpp"
#include "imgrank/graph.hpp"
#include "imgrank/nmf.hpp"
#include "imgrank/pca.hpp"
#include "imgrank/ranking.hpp"

namespace imgrank {

// The five compared methods, in the fixed report order.
enum class Method { Nmf, Pca, NmfPca, GraphRanking, NmfPcaGraphRanking };

constexpr std::array<Method, 5> kAllMethods = {Method::Nmf, Method::Pca, Method::NmfPca,
                                               Method::GraphRanking,
                                               Method::NmfPcaGraphRanking};

inline std::string method_name(Method m) {
  switch (m) {
    case Method::Nmf: return "NMF";
    case Method::Pca: return "PCA";
    case Method::NmfPca: return "NMF+PCA";
    case Method::GraphRanking: return "GraphRanking";
    case Method::NmfPcaGraphRanking: return "NMF+PCA+GraphRanking";
  }
  throw std::logic_error("unreachable");
}

inline bool method_uses_nmf(Method m) {
  return m == Method::Nmf || m == Method::NmfPca || m == Method::NmfPcaGraphRanking;
}

inline bool method_uses_pca(Method m) {
  return m == Method::Pca || m == Method::NmfPca || m == Method::NmfPcaGraphRanking;
}

inline bool method_uses_ranking(Method m) {
  return m == Method::GraphRanking || m == Method::NmfPcaGraphRanking;
}

// Stratified fold assignment: per record, the index of the fold that tests it.
struct FoldPartition {
  int n_folds = 0;
  std::vector<int> assignment;
  std::uint64_t seed = 0;

  std::vector<int> test_indices(int fold) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      if (assignment[i] == fold) out.push_back(static_cast<int>(i));
    }
    return out;
  }

  std::vector<int> train_indices(int fold) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
      if (assignment[i] != fold) out.push_back(static_cast<int>(i));
    }
    return out;
  }
};

namespace detail {

// Fisher-Yates with a fixed draw recipe so partitions do not depend on the
// standard library's shuffle implementation.
inline void seeded_shuffle(std::vector<int>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace detail

// Per class: shuffle member indices with the seeded generator, then deal
// round-robin to folds starting at fold 0. Classes smaller than n_folds
// simply appear in fewer folds.
inline FoldPartition make_folds(const Dataset& ds, int n_folds, std::uint64_t seed) {
  if (n_folds < 2) {
    throw std::invalid_argument("n_folds must be >= 2");
  }
  FoldPartition part;
  part.n_folds = n_folds;
  part.seed = seed;
  part.assignment.assign(ds.records.size(), -1);

  std::map<std::string, std::vector<int>> members;
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    members[ds.records[i].label].push_back(static_cast<int>(i));
  }
  std::mt19937_64 rng(seed);
  for (auto& [label, idx] : members) {
    detail::seeded_shuffle(idx, rng);
    for (std::size_t i = 0; i < idx.size(); ++i) {
      part.assignment[static_cast<std::size_t>(idx[i])] = static_cast<int>(i % n_folds);
    }
  }
  return part;
}

inline double accuracy(const std::vector<std::string>& predicted,
                       const std::vector<std::string>& truth) {
  if (predicted.size() != truth.size()) {
    throw std::invalid_argument("accuracy: length mismatch");
  }
  if (predicted.empty()) {
    throw std::invalid_argument("accuracy: empty input");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] == truth[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

// Everything a single fold run produces; models are kept so tests can verify
// that test-record labels never influence them.
struct FoldOutcome {
  std::vector<int> test_indices;
  std::vector<std::string> predictions;  // parallel to test_indices
  bool has_nmf = false;
  bool has_pca = false;
  NmfModel nmf;
  PcaModel pca;
  double sigma = 0;  // bandwidth used for the fold graph (ranking methods)
  int fallback_count = 0;
};

namespace detail {

// Per-record representation for one fold: models fit on training rows only,
// training coefficients from the fit, test rows encoded out-of-sample.
inline Eigen::MatrixXd fold_representation(const Dataset& ds, const std::vector<int>& train_idx,
                                           const std::vector<int>& test_idx, Method method,
                                           const Config& cfg, std::uint64_t nmf_seed,
                                           FoldOutcome& out) {
  Eigen::MatrixXd X = ds.feature_matrix();
  const Eigen::Index n = X.rows();

  if (method == Method::GraphRanking) {
    return X;  // ranks on the raw feature vectors
  }

  Eigen::MatrixXd train(static_cast<Eigen::Index>(train_idx.size()), X.cols());
  for (std::size_t i = 0; i < train_idx.size(); ++i) {
    train.row(static_cast<Eigen::Index>(i)) = X.row(train_idx[i]);
  }

  Eigen::MatrixXd h_block, z_block;
  if (method_uses_nmf(method)) {
    NmfFit fit = nmf_fit(train, cfg.nmf_rank, cfg.nmf_max_iter, cfg.nmf_tol, nmf_seed);
    h_block.resize(n, cfg.nmf_rank);
    for (std::size_t i = 0; i < train_idx.size(); ++i) {
      h_block.row(train_idx[i]) = fit.coefficients.col(static_cast<Eigen::Index>(i)).transpose();
    }
    for (const int t : test_idx) {
      h_block.row(t) =
          nmf_transform(fit.model, X.row(t).transpose(), cfg.nmf_max_iter, cfg.nmf_tol)
              .transpose();
    }
    out.has_nmf = true;
    out.nmf = std::move(fit.model);
  }
  if (method_uses_pca(method)) {
    PcaModel model = pca_fit(train, cfg.pca_dims);
    z_block.resize(n, cfg.pca_dims);
    for (Eigen::Index i = 0; i < n; ++i) {
      z_block.row(i) = pca_transform(model, X.row(i).transpose()).transpose();
    }
    out.has_pca = true;
    out.pca = std::move(model);
  }

  switch (method) {
    case Method::Nmf: return h_block;
    case Method::Pca: return z_block;
    case Method::NmfPca:
    case Method::NmfPcaGraphRanking: {
      Eigen::MatrixXd rep(n, h_block.cols() + z_block.cols());
      for (Eigen::Index i = 0; i < n; ++i) {
        rep.row(i) = combine(h_block.row(i).transpose(), z_block.row(i).transpose()).transpose();
      }
      return rep;
    }
    default: throw std::logic_error("unreachable");
  }
}

}  // namespace detail

// One cross-validation fold of one method. Labels of test records are never
// read: models fit on training rows, and ranking only consults training
// labels.
inline FoldOutcome run_fold(const Dataset& ds, const std::vector<int>& train_idx,
                            const std::vector<int>& test_idx, Method method, const Config& cfg,
                            std::uint64_t nmf_seed) {
  std::vector<int> seen(ds.records.size(), 0);
  for (const std::vector<int>* part : {&train_idx, &test_idx}) {
    for (const int t : *part) {
      if (t < 0 || t >= static_cast<int>(ds.records.size())) {
        throw std::invalid_argument("run_fold: record index out of range");
      }
      ++seen[static_cast<std::size_t>(t)];
    }
  }
  for (const int count : seen) {
    if (count != 1) {
      throw std::invalid_argument("run_fold: train and test must partition the dataset");
    }
  }

  FoldOutcome out;
  out.test_indices = test_idx;
  const Eigen::MatrixXd rep =
      detail::fold_representation(ds, train_idx, test_idx, method, cfg, nmf_seed, out);

  std::vector<std::string> node_labels(ds.records.size());
  for (const int t : train_idx) {
    node_labels[static_cast<std::size_t>(t)] = ds.records[static_cast<std::size_t>(t)].label;
  }

  if (method_uses_ranking(method)) {
    if (cfg.sigma.has_value()) {
      out.sigma = *cfg.sigma;
    } else {
      Eigen::MatrixXd train_rep(static_cast<Eigen::Index>(train_idx.size()), rep.cols());
      for (std::size_t i = 0; i < train_idx.size(); ++i) {
        train_rep.row(static_cast<Eigen::Index>(i)) = rep.row(train_idx[i]);
      }
      out.sigma = auto_sigma(train_rep, cfg.graph_k);
    }
    const AffinityGraph graph = build_knn_graph(rep, cfg.graph_k, out.sigma);
    const RankingSolver solver(graph, cfg.alpha);
    const LabeledIndex index{train_idx, test_idx};
    for (const int t : test_idx) {
      const RankPrediction pred = rank_nn_classify(solver, rep, node_labels, index, t);
      if (pred.fallback_used) ++out.fallback_count;
      out.predictions.push_back(pred.label);
    }
  } else {
    Eigen::MatrixXd train_rep(static_cast<Eigen::Index>(train_idx.size()), rep.cols());
    std::vector<std::string> train_labels;
    train_labels.reserve(train_idx.size());
    for (std::size_t i = 0; i < train_idx.size(); ++i) {
      train_rep.row(static_cast<Eigen::Index>(i)) = rep.row(train_idx[i]);
      train_labels.push_back(node_labels[static_cast<std::size_t>(train_idx[i])]);
    }
    for (const int t : test_idx) {
      out.predictions.push_back(
          euclidean_nn_classify(train_rep, train_labels, rep.row(t).transpose()));
    }
  }
  return out;
}

struct EvalReport {
  Method method = Method::Nmf;
  std::vector<double> per_fold_rates;
  double average_rate = 0;
  Eigen::MatrixXi confusion;  // rows: truth, cols: predicted
  std::vector<std::string> classes;
};

inline std::uint64_t fold_seed(std::uint64_t base, int fold) {
  return base + 1000003ULL * static_cast<std::uint64_t>(fold + 1);
}

inline EvalReport run_method(const Dataset& ds, const FoldPartition& part, Method method,
                             const Config& cfg, std::vector<FoldOutcome>* capture = nullptr) {
  EvalReport report;
  report.method = method;
  report.classes = ds.classes;
  const int c = static_cast<int>(ds.classes.size());
  report.confusion = Eigen::MatrixXi::Zero(c, c);

  std::map<std::string, int> class_index;
  for (int i = 0; i < c; ++i) class_index[ds.classes[static_cast<std::size_t>(i)]] = i;

  for (int fold = 0; fold < part.n_folds; ++fold) {
    const std::vector<int> test_idx = part.test_indices(fold);
    if (test_idx.empty()) continue;  // more folds than records in every class
    const std::vector<int> train_idx = part.train_indices(fold);
    FoldOutcome outcome;
    try {
      outcome = run_fold(ds, train_idx, test_idx, method, cfg, fold_seed(cfg.seed, fold));
    } catch (const std::exception& e) {
      throw std::runtime_error("fold " + std::to_string(fold) + ": " + e.what());
    }

    std::vector<std::string> truth;
    truth.reserve(test_idx.size());
    for (const int t : test_idx) {
      truth.push_back(ds.records[static_cast<std::size_t>(t)].label);
    }
    report.per_fold_rates.push_back(accuracy(outcome.predictions, truth));
    for (std::size_t i = 0; i < test_idx.size(); ++i) {
      report.confusion(class_index.at(truth[i]), class_index.at(outcome.predictions[i])) += 1;
    }
    if (capture) capture->push_back(std::move(outcome));
  }

  double sum = 0;
  for (const double r : report.per_fold_rates) sum += r;
  report.average_rate = report.per_fold_rates.empty()
                            ? 0.0
                            : sum / static_cast<double>(report.per_fold_rates.size());
  return report;
}

inline std::string format_percent(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f%%", rate * 100.0);
  return buf;
}

// Aligned text table, one row per method in the fixed order, percent with
// one decimal.
inline std::string render_report(const std::vector<EvalReport>& reports) {
  if (reports.empty()) {
    throw std::invalid_argument("render_report: no reports");
  }
  const std::size_t folds = reports.front().per_fold_rates.size();
  std::size_t name_width = std::string("Method").size();
  for (const EvalReport& r : reports) {
    name_width = std::max(name_width, method_name(r.method).size());
  }

  std::ostringstream out;
  out << std::left;
  out.width(static_cast<std::streamsize>(name_width));
  out << "Method";
  for (std::size_t f = 0; f < folds; ++f) {
    std::ostringstream h;
    h << "fold" << f;
    out << "  " << std::setw(7) << h.str();
  }
  out << "  " << std::setw(7) << "Average" << "\n";

  for (const EvalReport& r : reports) {
    out.width(static_cast<std::streamsize>(name_width));
    out << method_name(r.method);
    for (const double rate : r.per_fold_rates) {
      out << "  " << std::setw(7) << format_percent(rate);
    }
    out << "  " << std::setw(7) << format_percent(r.average_rate) << "\n";
  }
  return out.str();
}

// CSV twin of the table: method,fold,rate with raw floats.
inline void write_report_csv(const std::string& path, const std::vector<EvalReport>& reports) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out << "method,fold,rate\n";
  char buf[32];
  for (const EvalReport& r : reports) {
    for (std::size_t f = 0; f < r.per_fold_rates.size(); ++f) {
      std::snprintf(buf, sizeof(buf), "%.17g", r.per_fold_rates[f]);
      out << method_name(r.method) << "," << f << "," << buf << "\n";
    }
  }
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

inline void write_confusion_csv(const std::string& path, const EvalReport& report) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out << "truth\\predicted";
  for (const std::string& c : report.classes) out << "," << c;
  out << "\n";
  for (Eigen::Index i = 0; i < report.confusion.rows(); ++i) {
    out << report.classes[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < report.confusion.cols(); ++j) {
      out << "," << report.confusion(i, j);
    }
    out << "\n";
  }
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

}  // namespace imgrank
