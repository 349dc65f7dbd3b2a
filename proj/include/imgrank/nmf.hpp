#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace imgrank {

namespace detail {

// Portable uniform draw in (0, 1]: fixed bit recipe so results do not depend
// on the standard library's distribution implementation.
inline double uniform_open_closed(std::mt19937_64& rng) {
  return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

inline void require_nonnegative(const Eigen::MatrixXd& m, const char* what) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (m(i, j) < 0) {
        std::ostringstream msg;
        msg << what << " has a negative entry at (" << i << "," << j << "): " << m(i, j);
        throw std::invalid_argument(msg.str());
      }
    }
  }
}

}  // namespace detail

// Frobenius NMF of the sample matrix: rows of X are samples, internally
// factored as X^T (D x N) ~ W (D x k) * H (k x N) by Lee-Seung
// multiplicative updates. The objective trace records ||X^T - W H||_F,
// starting with the error of the random initialization; the updates make it
// nonincreasing.
struct NmfModel {
  Eigen::MatrixXd basis;                // W, D x k, entrywise >= 0
  int rank = 0;                         // k
  int iterations_run = 0;
  std::vector<double> objective_trace;  // Frobenius error, init + one per iteration
  double epsilon = 1e-12;               // denominator guard
};

struct NmfFit {
  NmfModel model;
  Eigen::MatrixXd coefficients;  // H, k x N, columns follow the sample order of X
};

inline NmfFit nmf_fit(const Eigen::MatrixXd& X, int rank, int max_iter = 500,
                      double tol = 1e-6, std::uint64_t seed = 0) {
  detail::require_nonnegative(X, "nmf_fit: X");
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();
  if (rank < 1 || rank > std::min(n, d)) {
    throw std::invalid_argument("nmf_fit: rank must be in [1, min(N, D)]");
  }
  if (max_iter < 1) {
    throw std::invalid_argument("nmf_fit: max_iter must be >= 1");
  }

  const Eigen::MatrixXd Xt = X.transpose();  // D x N
  const double eps = 1e-12;

  std::mt19937_64 rng(seed);
  Eigen::MatrixXd W(d, rank), H(rank, n);
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < rank; ++j) W(i, j) = detail::uniform_open_closed(rng);
  for (Eigen::Index i = 0; i < rank; ++i)
    for (Eigen::Index j = 0; j < n; ++j) H(i, j) = detail::uniform_open_closed(rng);

  NmfFit fit;
  fit.model.rank = rank;
  fit.model.epsilon = eps;
  fit.model.objective_trace.push_back((Xt - W * H).norm());

  int iterations = 0;
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::MatrixXd w_num = Xt * H.transpose();
    const Eigen::MatrixXd w_den = W * (H * H.transpose());
    W.array() *= w_num.array() / (w_den.array() + eps);
    const Eigen::MatrixXd h_num = W.transpose() * Xt;
    const Eigen::MatrixXd h_den = (W.transpose() * W) * H;
    H.array() *= h_num.array() / (h_den.array() + eps);
    ++iterations;
    const double err = (Xt - W * H).norm();
    const double prev = fit.model.objective_trace.back();
    fit.model.objective_trace.push_back(err);
    if (prev <= 0 || (prev - err) / prev < tol) break;
  }

  fit.model.basis = std::move(W);
  fit.model.iterations_run = iterations;
  fit.coefficients = std::move(H);
  return fit;
}

// Out-of-sample encoding: minimizes ||x - W h|| over h >= 0 by the H-update
// only, with the basis frozen. h starts as the uniform 1/k vector.
inline Eigen::VectorXd nmf_transform(const NmfModel& model, const Eigen::VectorXd& x,
                                     int max_iter = 500, double tol = 1e-6) {
  if (x.size() != model.basis.rows()) {
    throw std::invalid_argument("nmf_transform: dimension mismatch");
  }
  detail::require_nonnegative(x, "nmf_transform: x");
  const Eigen::MatrixXd& W = model.basis;
  const Eigen::MatrixXd WtW = W.transpose() * W;
  const Eigen::VectorXd Wtx = W.transpose() * x;

  Eigen::VectorXd h = Eigen::VectorXd::Constant(model.rank, 1.0 / model.rank);
  double prev = (x - W * h).norm();
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd den = WtW * h;
    h.array() *= Wtx.array() / (den.array() + model.epsilon);
    const double err = (x - W * h).norm();
    if (prev <= 0 || (prev - err) / prev < tol) break;
    prev = err;
  }
  return h;
}

}  // namespace imgrank
