#pragma once

#include <Eigen/Core>
#include <Eigen/LU>

#include <cmath>
#include <stdexcept>

#include "imgrank/graph.hpp"

namespace imgrank {

struct RankingResult {
  int query = 0;
  Eigen::VectorXd scores;  // f
  double alpha = 0;
  int iterations = 0;      // 0 for the closed-form solve
  bool closed_form = false;
  bool converged = true;   // iterative solver hit max_iter without converging if false
};

// Holds one LU factorization of (I - alpha S) so many queries against the
// same graph reuse it.
class RankingSolver {
 public:
  RankingSolver(const AffinityGraph& graph, double alpha) : n_(graph.n), alpha_(alpha) {
    if (alpha < 0 || alpha >= 1) {
      throw std::invalid_argument("manifold ranking: alpha must be in [0, 1)");
    }
    const Eigen::MatrixXd system =
        Eigen::MatrixXd::Identity(n_, n_) - alpha * graph.normalized;
    lu_.compute(system);
    // rho(S) <= 1 and alpha < 1 make the system nonsingular; guard anyway.
    // (The determinant itself can underflow on large graphs, so inspect the
    // U diagonal instead.)
    if ((lu_.matrixLU().diagonal().array() == 0.0).any()) {
      throw std::runtime_error("manifold ranking: singular system");
    }
  }

  int size() const { return n_; }
  double alpha() const { return alpha_; }

  Eigen::VectorXd scores(int query) const {
    if (query < 0 || query >= n_) {
      throw std::invalid_argument("manifold ranking: query index out of range");
    }
    Eigen::VectorXd y = Eigen::VectorXd::Zero(n_);
    y[query] = 1.0;
    return lu_.solve(y);
  }

 private:
  int n_;
  double alpha_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

// f* = (I - alpha S)^(-1) y with y the indicator of the query node.
inline RankingResult manifold_rank_closed(const AffinityGraph& graph, int query, double alpha) {
  RankingSolver solver(graph, alpha);
  RankingResult result;
  result.query = query;
  result.alpha = alpha;
  result.closed_form = true;
  result.scores = solver.scores(query);
  return result;
}

// Power iteration f <- alpha S f + (1 - alpha) y starting from f = y. The
// fixed point is (1 - alpha) (I - alpha S)^(-1) y, i.e. the closed-form
// scores scaled by (1 - alpha); divide by (1 - alpha) to compare.
inline RankingResult manifold_rank_iterative(const AffinityGraph& graph, int query, double alpha,
                                             double tol = 1e-12, int max_iter = 100000) {
  if (alpha < 0 || alpha >= 1) {
    throw std::invalid_argument("manifold ranking: alpha must be in [0, 1)");
  }
  if (query < 0 || query >= graph.n) {
    throw std::invalid_argument("manifold ranking: query index out of range");
  }
  if (tol <= 0) {
    throw std::invalid_argument("manifold ranking: tol must be positive");
  }
  Eigen::VectorXd y = Eigen::VectorXd::Zero(graph.n);
  y[query] = 1.0;

  RankingResult result;
  result.query = query;
  result.alpha = alpha;

  Eigen::VectorXd f = y;
  result.converged = false;
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXd next = alpha * (graph.normalized * f) + (1.0 - alpha) * y;
    const double delta = (next - f).lpNorm<Eigen::Infinity>();
    f = std::move(next);
    result.iterations = it;
    if (delta < tol) {
      result.converged = true;
      break;
    }
  }
  result.scores = std::move(f);
  return result;
}

// Row i holds the closed-form ranking scores for query i. One factorization
// serves all right-hand sides.
inline Eigen::MatrixXd similarity_matrix(const AffinityGraph& graph, double alpha) {
  RankingSolver solver(graph, alpha);
  Eigen::MatrixXd scores(graph.n, graph.n);
  for (int i = 0; i < graph.n; ++i) {
    scores.row(i) = solver.scores(i).transpose();
  }
  return scores;
}

}  // namespace imgrank
