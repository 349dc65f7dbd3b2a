#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace imgrank {

// Experiment knobs. File format is plain "key = value" lines with '#'
// comments; unknown keys are rejected, absent keys keep their defaults.
struct Config {
  int nmf_rank = 30;
  int pca_dims = 30;
  int nmf_max_iter = 500;
  double nmf_tol = 1e-6;
  int graph_k = 10;
  double alpha = 0.99;
  std::optional<double> sigma;  // empty = AUTO bandwidth
  int n_folds = 10;
  std::uint64_t seed = 42;

  void validate() const {
    if (nmf_rank < 1) throw std::invalid_argument("nmf_rank must be >= 1");
    if (pca_dims < 1) throw std::invalid_argument("pca_dims must be >= 1");
    if (nmf_max_iter < 1) throw std::invalid_argument("nmf_max_iter must be >= 1");
    if (nmf_tol <= 0) throw std::invalid_argument("nmf_tol must be > 0");
    if (graph_k < 1) throw std::invalid_argument("graph_k must be >= 1");
    if (alpha < 0 || alpha >= 1) throw std::invalid_argument("alpha must be in [0, 1)");
    if (sigma.has_value() && *sigma <= 0) throw std::invalid_argument("sigma must be AUTO or > 0");
    if (n_folds < 2) throw std::invalid_argument("n_folds must be >= 2");
  }

  std::string echo() const {
    std::ostringstream out;
    out << "nmf_rank = " << nmf_rank << "\n"
        << "pca_dims = " << pca_dims << "\n"
        << "nmf_max_iter = " << nmf_max_iter << "\n"
        << "nmf_tol = " << nmf_tol << "\n"
        << "graph_k = " << graph_k << "\n"
        << "alpha = " << alpha << "\n"
        << "sigma = " << (sigma.has_value() ? std::to_string(*sigma) : std::string("AUTO")) << "\n"
        << "n_folds = " << n_folds << "\n"
        << "seed = " << seed << "\n";
    return out.str();
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream ss(value);
  T out;
  char extra;
  if (!(ss >> out) || ss >> extra) {
    throw std::invalid_argument("bad value for " + key + ": '" + value + "'");
  }
  return out;
}

}  // namespace detail

inline Config parse_config_text(std::istream& in) {
  Config cfg;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) +
                                  ": expected 'key = value'");
    }
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key == "nmf_rank") {
      cfg.nmf_rank = detail::parse_number<int>(key, value);
    } else if (key == "pca_dims") {
      cfg.pca_dims = detail::parse_number<int>(key, value);
    } else if (key == "nmf_max_iter") {
      cfg.nmf_max_iter = detail::parse_number<int>(key, value);
    } else if (key == "nmf_tol") {
      cfg.nmf_tol = detail::parse_number<double>(key, value);
    } else if (key == "graph_k") {
      cfg.graph_k = detail::parse_number<int>(key, value);
    } else if (key == "alpha") {
      cfg.alpha = detail::parse_number<double>(key, value);
    } else if (key == "sigma") {
      if (value == "AUTO") {
        cfg.sigma.reset();
      } else {
        cfg.sigma = detail::parse_number<double>(key, value);
      }
    } else if (key == "n_folds") {
      cfg.n_folds = detail::parse_number<int>(key, value);
    } else if (key == "seed") {
      cfg.seed = detail::parse_number<std::uint64_t>(key, value);
    } else {
      throw std::invalid_argument("unknown config key: " + key);
    }
  }
  cfg.validate();
  return cfg;
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config: " + path);
  }
  return parse_config_text(in);
}

}  // namespace imgrank
