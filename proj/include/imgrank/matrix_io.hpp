#pragma once

#include <Eigen/Core>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace imgrank {

// Plain-text matrix format: first line "rows cols", then one row per line,
// entries separated by single spaces, 17 significant digits.

inline void save_matrix(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out << m.rows() << " " << m.cols() << "\n";
  char buf[64];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      if (j > 0) out << " ";
      out << buf;
    }
    out << "\n";
  }
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

inline Eigen::MatrixXd load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open: " + path);
  }
  Eigen::Index rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0) {
    throw std::runtime_error("bad matrix header in " + path);
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (!(in >> m(i, j))) {
        std::ostringstream msg;
        msg << "truncated matrix in " << path << " at (" << i << "," << j << ")";
        throw std::runtime_error(msg.str());
      }
    }
  }
  return m;
}

inline void save_vector(const std::string& path, const Eigen::VectorXd& v) {
  save_matrix(path, v);  // stored as a rows x 1 matrix
}

inline Eigen::VectorXd load_vector(const std::string& path) {
  Eigen::MatrixXd m = load_matrix(path);
  if (m.cols() != 1) {
    throw std::runtime_error("expected a single-column matrix in " + path);
  }
  return m.col(0);
}

}  // namespace imgrank
