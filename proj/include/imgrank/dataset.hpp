#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "imgrank/features.hpp"
#include "imgrank/image.hpp"

namespace imgrank {

struct ImageRecord {
  std::string id;
  std::string path;
  std::string label;
  Image pixels;
};

struct FeatureVector {
  std::string id;
  std::string label;          // empty when unlabeled
  Eigen::VectorXd values;     // dimension kFeatureDim
};

struct Dataset {
  std::vector<FeatureVector> records;
  std::vector<std::string> classes;  // distinct labels, sorted

  Eigen::MatrixXd feature_matrix() const {
    if (records.empty()) return {};
    const Eigen::Index dim = records.front().values.size();
    Eigen::MatrixXd X(static_cast<Eigen::Index>(records.size()), dim);
    for (std::size_t i = 0; i < records.size(); ++i) {
      if (records[i].values.size() != dim) {
        throw std::invalid_argument("dataset records disagree on feature dimension");
      }
      X.row(static_cast<Eigen::Index>(i)) = records[i].values.transpose();
    }
    return X;
  }
};

// Scans root/<class_name>/<image>.(png|jpg|jpeg|bmp). Listing is
// lexicographic by (class, filename) so corpus order is deterministic.
inline std::vector<std::pair<std::string, std::string>> load_corpus(const std::string& root) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(root)) {
    throw std::runtime_error("corpus root does not exist: " + root);
  }
  std::vector<std::string> class_dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) class_dirs.push_back(entry.path().filename().string());
  }
  if (class_dirs.empty()) {
    throw std::runtime_error("no class directories under " + root);
  }
  std::sort(class_dirs.begin(), class_dirs.end());

  std::vector<std::pair<std::string, std::string>> listing;
  for (const std::string& cls : class_dirs) {
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(fs::path(root) / cls)) {
      if (entry.is_regular_file() && has_raster_extension(entry.path().filename().string())) {
        files.push_back(entry.path().filename().string());
      }
    }
    if (files.empty()) {
      throw std::runtime_error("class " + cls + " has no images");
    }
    std::sort(files.begin(), files.end());
    for (const std::string& f : files) {
      listing.emplace_back((fs::path(root) / cls / f).string(), cls);
    }
  }
  return listing;
}

inline FeatureVector extract_features(const ImageRecord& record) {
  Preprocessed pre = preprocess(record.pixels);
  FeatureVector fv;
  fv.id = record.id;
  fv.label = record.label;
  fv.values = feature_blocks(pre.rgb, pre.gray);
  return fv;
}

inline void sort_canonical(std::vector<FeatureVector>& records) {
  std::sort(records.begin(), records.end(), [](const FeatureVector& a, const FeatureVector& b) {
    return std::tie(a.label, a.id) < std::tie(b.label, b.id);
  });
}

inline std::vector<std::string> distinct_classes(const std::vector<FeatureVector>& records) {
  std::vector<std::string> classes;
  classes.reserve(records.size());
  for (const auto& r : records) classes.push_back(r.label);
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  return classes;
}

inline void require_unique_ids(const std::vector<FeatureVector>& records) {
  std::vector<std::string> ids;
  ids.reserve(records.size());
  for (const auto& r : records) ids.push_back(r.id);
  std::sort(ids.begin(), ids.end());
  const auto dup = std::adjacent_find(ids.begin(), ids.end());
  if (dup != ids.end()) {
    throw std::runtime_error("duplicate record id: " + *dup);
  }
}

// Decodes and featurizes a whole corpus. Decode failures carry the path.
inline Dataset extract_corpus(const std::string& root) {
  Dataset ds;
  for (const auto& [path, label] : load_corpus(root)) {
    ImageRecord rec;
    rec.path = path;
    rec.label = label;
    rec.id = label + "/" + std::filesystem::path(path).filename().string();
    try {
      rec.pixels = read_image(path);
      ds.records.push_back(extract_features(rec));
    } catch (const std::exception& e) {
      throw std::runtime_error("failed to extract " + path + ": " + e.what());
    }
  }
  sort_canonical(ds.records);
  ds.classes = distinct_classes(ds.records);
  require_unique_ids(ds.records);
  return ds;
}

// Feature cache: CSV with header id,label,f0,...,f166, canonical row order,
// values with 9 significant digits.
inline void save_features_csv(const std::string& path, const Dataset& ds) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  out << "id,label";
  for (int i = 0; i < kFeatureDim; ++i) out << ",f" << i;
  out << "\n";
  char buf[32];
  for (const FeatureVector& fv : ds.records) {
    out << fv.id << "," << fv.label;
    for (int i = 0; i < kFeatureDim; ++i) {
      std::snprintf(buf, sizeof(buf), "%.9g", fv.values[i]);
      out << "," << buf;
    }
    out << "\n";
  }
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

inline Dataset load_features_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open: " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("empty feature cache: " + path);
  }
  Dataset ds;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    FeatureVector fv;
    fv.values.resize(kFeatureDim);
    if (!std::getline(ss, fv.id, ',') || !std::getline(ss, fv.label, ',')) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": malformed row");
    }
    for (int i = 0; i < kFeatureDim; ++i) {
      if (!std::getline(ss, field, ',')) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected " +
                                 std::to_string(kFeatureDim) + " feature columns");
      }
      try {
        fv.values[i] = std::stod(field);
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) + ": bad number '" + field + "'");
      }
    }
    if (std::getline(ss, field, ',')) {
      throw std::runtime_error(path + ":" + std::to_string(line_no) + ": too many columns");
    }
    ds.records.push_back(std::move(fv));
  }
  if (ds.records.empty()) {
    throw std::runtime_error("feature cache has no rows: " + path);
  }
  sort_canonical(ds.records);
  ds.classes = distinct_classes(ds.records);
  require_unique_ids(ds.records);
  return ds;
}

}  // namespace imgrank
