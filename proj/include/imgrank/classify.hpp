#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

#include "imgrank/ranking.hpp"

namespace imgrank {

// Node split for transductive classification: train nodes carry labels, test
// nodes do not. Disjoint, and together they cover the graph.
struct LabeledIndex {
  std::vector<int> train_indices;
  std::vector<int> test_indices;
};

// Plain 1-NN by Euclidean distance; ties break to the lowest train index.
inline std::string euclidean_nn_classify(const Eigen::MatrixXd& train,
                                         const std::vector<std::string>& train_labels,
                                         const Eigen::VectorXd& query) {
  if (train.rows() < 1) {
    throw std::invalid_argument("euclidean_nn_classify: empty training set");
  }
  if (train.cols() != query.size() ||
      train.rows() != static_cast<Eigen::Index>(train_labels.size())) {
    throw std::invalid_argument("euclidean_nn_classify: dimension mismatch");
  }
  Eigen::Index best = 0;
  double best_d2 = (train.row(0).transpose() - query).squaredNorm();
  for (Eigen::Index i = 1; i < train.rows(); ++i) {
    const double d2 = (train.row(i).transpose() - query).squaredNorm();
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return train_labels[static_cast<std::size_t>(best)];
}

struct RankPrediction {
  std::string label;
  int best_node = -1;          // training node that won the argmax
  bool fallback_used = false;  // query was isolated; fell back to Euclidean 1-NN
};

// Manifold-ranking nearest neighbor: rank all nodes from the query and
// predict the label of the highest-scoring training node (test nodes and the
// query itself excluded, ties to the lowest node index). If every training
// score is zero the query's component holds no training node; fall back to
// Euclidean 1-NN on the vectors, flagged in the result.
//
// node_labels is indexed by graph node; only entries at train indices are
// ever read.
inline RankPrediction rank_nn_classify(const RankingSolver& solver,
                                       const Eigen::MatrixXd& vectors,
                                       const std::vector<std::string>& node_labels,
                                       const LabeledIndex& index, int test_node) {
  if (std::find(index.test_indices.begin(), index.test_indices.end(), test_node) ==
      index.test_indices.end()) {
    throw std::invalid_argument("rank_nn_classify: node is not a test node");
  }
  if (index.train_indices.empty()) {
    throw std::invalid_argument("rank_nn_classify: no training nodes");
  }
  const Eigen::VectorXd scores = solver.scores(test_node);

  std::vector<bool> is_train(static_cast<std::size_t>(solver.size()), false);
  for (const int t : index.train_indices) is_train[static_cast<std::size_t>(t)] = true;

  RankPrediction pred;
  double best_score = 0.0;
  for (int t = 0; t < solver.size(); ++t) {
    // strict > keeps the lowest node index on ties
    if (is_train[static_cast<std::size_t>(t)] && scores[t] > best_score) {
      best_score = scores[t];
      pred.best_node = t;
    }
  }
  if (pred.best_node >= 0) {
    pred.label = node_labels[static_cast<std::size_t>(pred.best_node)];
    return pred;
  }

  // isolated query: all training scores zero
  pred.fallback_used = true;
  Eigen::MatrixXd train(static_cast<Eigen::Index>(index.train_indices.size()), vectors.cols());
  std::vector<std::string> train_labels;
  train_labels.reserve(index.train_indices.size());
  for (std::size_t i = 0; i < index.train_indices.size(); ++i) {
    train.row(static_cast<Eigen::Index>(i)) = vectors.row(index.train_indices[i]);
    train_labels.push_back(node_labels[static_cast<std::size_t>(index.train_indices[i])]);
  }
  pred.label = euclidean_nn_classify(train, train_labels, vectors.row(test_node).transpose());
  return pred;
}

// Convenience overload that builds the solver for a single query.
inline RankPrediction rank_nn_classify(const AffinityGraph& graph,
                                       const Eigen::MatrixXd& vectors,
                                       const std::vector<std::string>& node_labels,
                                       const LabeledIndex& index, int test_node, double alpha) {
  RankingSolver solver(graph, alpha);
  return rank_nn_classify(solver, vectors, node_labels, index, test_node);
}

}  // namespace imgrank
