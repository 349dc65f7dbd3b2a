#pragma once

#include <Eigen/Core>

namespace imgrank {

constexpr double kNormFloor = 1e-12;

// Unit-norm copy; blocks with norm below the floor are left as zeros.
inline Eigen::VectorXd normalize_block(const Eigen::VectorXd& v) {
  const double norm = v.norm();
  if (norm < kNormFloor) return Eigen::VectorXd::Zero(v.size());
  return v / norm;
}

// "New image representation": L2-normalized NMF coefficients concatenated
// with L2-normalized PCA projections.
inline Eigen::VectorXd combine(const Eigen::VectorXd& h, const Eigen::VectorXd& z) {
  Eigen::VectorXd out(h.size() + z.size());
  out.head(h.size()) = normalize_block(h);
  out.tail(z.size()) = normalize_block(z);
  return out;
}

}  // namespace imgrank
