#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace imgrank {

// kNN affinity graph: symmetric nonnegative weights with zero diagonal, plus
// the symmetric normalization S = D^(-1/2) W D^(-1/2). Rows of isolated
// nodes (zero degree) stay zero in S.
struct AffinityGraph {
  int n = 0;
  Eigen::MatrixXd weights;     // W_g
  Eigen::MatrixXd normalized;  // S
};

inline Eigen::MatrixXd pairwise_distances(const Eigen::MatrixXd& vectors) {
  const Eigen::Index n = vectors.rows();
  const Eigen::VectorXd sq = vectors.rowwise().squaredNorm();
  Eigen::MatrixXd d2 = sq.replicate(1, n) + sq.transpose().replicate(n, 1) -
                       2.0 * vectors * vectors.transpose();
  return d2.cwiseMax(0.0).cwiseSqrt();
}

// Distance of each point to its k-th nearest neighbor (self excluded).
inline std::vector<double> kth_neighbor_distances(const Eigen::MatrixXd& dist, int k) {
  const Eigen::Index n = dist.rows();
  std::vector<double> out(static_cast<std::size_t>(n));
  std::vector<double> row(static_cast<std::size_t>(n) - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::size_t m = 0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) row[m++] = dist(i, j);
    }
    std::nth_element(row.begin(), row.begin() + (k - 1), row.end());
    out[static_cast<std::size_t>(i)] = row[static_cast<std::size_t>(k - 1)];
  }
  return out;
}

namespace detail {

inline double median_kth_distance(const Eigen::MatrixXd& dist, int k) {
  std::vector<double> kth = kth_neighbor_distances(dist, k);
  std::sort(kth.begin(), kth.end());
  const std::size_t n = kth.size();
  const double median = (n % 2 == 1) ? kth[n / 2] : 0.5 * (kth[n / 2 - 1] + kth[n / 2]);
  return median > 0 ? median : 1.0;
}

}  // namespace detail

// Bandwidth rule for sigma = AUTO: median over points of the distance to the
// k-th nearest neighbor; 1 if that median is zero.
inline double auto_sigma(const Eigen::MatrixXd& vectors, int k) {
  if (vectors.rows() < 2 || k < 1 || k > vectors.rows() - 1) {
    throw std::invalid_argument("auto_sigma: need N >= 2 and 1 <= k <= N-1");
  }
  return detail::median_kth_distance(pairwise_distances(vectors), k);
}

// Connects every point to its k nearest Euclidean neighbors with Gaussian
// weights exp(-d^2 / (2 sigma^2)), symmetrized by max. sigma omitted means
// the AUTO rule above. Neighbor ties break toward the lower index.
inline AffinityGraph build_knn_graph(const Eigen::MatrixXd& vectors, int k,
                                     std::optional<double> sigma = std::nullopt) {
  const Eigen::Index n = vectors.rows();
  if (n < 2) {
    throw std::invalid_argument("build_knn_graph: need at least 2 points");
  }
  if (k < 1 || k > n - 1) {
    throw std::invalid_argument("build_knn_graph: k must be in [1, N-1]");
  }
  const Eigen::MatrixXd dist = pairwise_distances(vectors);

  double sig;
  if (sigma.has_value()) {
    if (*sigma <= 0) {
      throw std::invalid_argument("build_knn_graph: sigma must be positive");
    }
    sig = *sigma;
  } else {
    sig = detail::median_kth_distance(dist, k);
  }

  AffinityGraph graph;
  graph.n = static_cast<int>(n);
  graph.weights = Eigen::MatrixXd::Zero(n, n);
  const double denom = 2.0 * sig * sig;

  std::vector<Eigen::Index> order;
  order.reserve(static_cast<std::size_t>(n) - 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    order.clear();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != i) order.push_back(j);
    }
    std::partial_sort(order.begin(), order.begin() + k, order.end(),
                      [&](Eigen::Index a, Eigen::Index b) {
                        if (dist(i, a) != dist(i, b)) return dist(i, a) < dist(i, b);
                        return a < b;
                      });
    for (int m = 0; m < k; ++m) {
      const Eigen::Index j = order[static_cast<std::size_t>(m)];
      const double w = std::exp(-dist(i, j) * dist(i, j) / denom);
      // symmetrize by max: keep every directed kNN edge
      graph.weights(i, j) = std::max(graph.weights(i, j), w);
      graph.weights(j, i) = graph.weights(i, j);
    }
  }

  const Eigen::VectorXd degree = graph.weights.rowwise().sum();
  Eigen::VectorXd inv_sqrt(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    inv_sqrt[i] = degree[i] > 0 ? 1.0 / std::sqrt(degree[i]) : 0.0;
  }
  graph.normalized = inv_sqrt.asDiagonal() * graph.weights * inv_sqrt.asDiagonal();
  return graph;
}

// Debug dump: one "i j w" line per upper-triangle nonzero.
inline void dump_graph(const std::string& path, const AffinityGraph& graph) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  char buf[64];
  for (int i = 0; i < graph.n; ++i) {
    for (int j = i + 1; j < graph.n; ++j) {
      if (graph.weights(i, j) != 0) {
        std::snprintf(buf, sizeof(buf), "%d %d %.17g", i, j, graph.weights(i, j));
        out << buf << "\n";
      }
    }
  }
}

}  // namespace imgrank
