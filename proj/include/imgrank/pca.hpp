#pragma once

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <stdexcept>

namespace imgrank {

struct PcaModel {
  Eigen::VectorXd mean;         // D
  Eigen::MatrixXd components;   // D x p, orthonormal columns
  Eigen::VectorXd eigenvalues;  // p, descending
};

namespace detail {

// Deterministic sign convention: the coordinate of largest magnitude in each
// column is made positive; ties pick the lowest index.
inline void fix_component_signs(Eigen::MatrixXd& U) {
  for (Eigen::Index j = 0; j < U.cols(); ++j) {
    Eigen::Index best = 0;
    double best_abs = std::abs(U(0, j));
    for (Eigen::Index i = 1; i < U.rows(); ++i) {
      const double a = std::abs(U(i, j));
      if (a > best_abs) {
        best_abs = a;
        best = i;
      }
    }
    if (U(best, j) < 0) U.col(j) = -U.col(j);
  }
}

}  // namespace detail

// Classic covariance PCA: eigendecomposition of (X - mu)^T (X - mu) / (N - 1),
// top-p eigenpairs by descending eigenvalue.
inline PcaModel pca_fit(const Eigen::MatrixXd& X, int p) {
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();
  if (n < 2) {
    throw std::invalid_argument("pca_fit: need at least 2 samples");
  }
  if (p < 1 || p > std::min<Eigen::Index>(n - 1, d)) {
    throw std::invalid_argument("pca_fit: p must be in [1, min(N-1, D)]");
  }
  PcaModel model;
  model.mean = X.colwise().mean();
  const Eigen::MatrixXd centered = X.rowwise() - model.mean.transpose();
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(n - 1);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("pca_fit: eigendecomposition failed");
  }
  // solver returns ascending order; take the top p reversed
  model.components.resize(d, p);
  model.eigenvalues.resize(p);
  for (int j = 0; j < p; ++j) {
    const Eigen::Index src = d - 1 - j;
    model.components.col(j) = solver.eigenvectors().col(src);
    model.eigenvalues[j] = solver.eigenvalues()[src];
  }
  detail::fix_component_signs(model.components);
  return model;
}

inline Eigen::VectorXd pca_transform(const PcaModel& model, const Eigen::VectorXd& x) {
  if (x.size() != model.mean.size()) {
    throw std::invalid_argument("pca_transform: dimension mismatch");
  }
  return model.components.transpose() * (x - model.mean);
}

}  // namespace imgrank
