#pragma once

#include <Eigen/Core>

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

#include "imgrank/image.hpp"

namespace imgrank {

constexpr int kColorDim = 72;    // HSV 8x3x3 histogram
constexpr int kTextureDim = 59;  // uniform LBP(8,1)
constexpr int kShapeDim = 36;    // Sobel edge-orientation histogram, 10 deg bins
constexpr int kFeatureDim = kColorDim + kTextureDim + kShapeDim;

constexpr int kColorOffset = 0;
constexpr int kTextureOffset = kColorDim;
constexpr int kShapeOffset = kColorDim + kTextureDim;

struct Hsv {
  double h = 0;  // [0, 360)
  double s = 0;  // [0, 1]
  double v = 0;  // [0, 1]
};

inline Hsv rgb_to_hsv(Rgb p) {
  const double r = p.r / 255.0, g = p.g / 255.0, b = p.b / 255.0;
  const double maxc = std::max({r, g, b});
  const double minc = std::min({r, g, b});
  const double delta = maxc - minc;
  Hsv out;
  out.v = maxc;
  out.s = maxc > 0 ? delta / maxc : 0.0;
  if (delta > 0) {
    double h;
    if (maxc == r) {
      h = (g - b) / delta;
    } else if (maxc == g) {
      h = (b - r) / delta + 2.0;
    } else {
      h = (r - g) / delta + 4.0;
    }
    h *= 60.0;
    if (h < 0) h += 360.0;
    if (h >= 360.0) h -= 360.0;
    out.h = h;
  }
  return out;
}

// Bin index with the top edge clamped into the last bin.
inline int quantize(double value, double range, int bins) {
  int idx = static_cast<int>(value / range * bins);
  return std::clamp(idx, 0, bins - 1);
}

// 72-bin HSV color histogram: H into 8 bins, S into 3, V into 3,
// flat index h*9 + s*3 + v, normalized to sum 1.
inline Eigen::VectorXd color_histogram(const Image& rgb) {
  if (rgb.width != kWorkingSize || rgb.height != kWorkingSize) {
    throw std::invalid_argument("color_histogram expects the 128x128 working image");
  }
  Eigen::VectorXd hist = Eigen::VectorXd::Zero(kColorDim);
  for (const Rgb& p : rgb.pixels) {
    const Hsv c = rgb_to_hsv(p);
    const int h = quantize(c.h, 360.0, 8);
    const int s = quantize(c.s, 1.0, 3);
    const int v = quantize(c.v, 1.0, 3);
    hist[h * 9 + s * 3 + v] += 1.0;
  }
  hist /= static_cast<double>(rgb.pixels.size());
  return hist;
}

namespace detail {

// Neighbor offsets, clockwise from the top-left corner of the 3x3 ring.
constexpr std::array<std::array<int, 2>, 8> kLbpRing = {
    {{-1, -1}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}}};

inline int circular_transitions(unsigned code) {
  int t = 0;
  for (int i = 0; i < 8; ++i) {
    const unsigned a = (code >> i) & 1u;
    const unsigned b = (code >> ((i + 1) % 8)) & 1u;
    if (a != b) ++t;
  }
  return t;
}

// Maps each 8-bit LBP code to its histogram bin: the 58 uniform codes (at
// most two circular transitions) in ascending order get bins 0..57, all
// non-uniform codes share bin 58.
inline const std::array<int, 256>& lbp_bin_table() {
  static const std::array<int, 256> table = [] {
    std::array<int, 256> t{};
    int next = 0;
    for (unsigned code = 0; code < 256; ++code) {
      t[code] = circular_transitions(code) <= 2 ? next++ : -1;
    }
    for (unsigned code = 0; code < 256; ++code) {
      if (t[code] < 0) t[code] = 58;
    }
    return t;
  }();
  return table;
}

}  // namespace detail

// LBP code at (y, x): bit i set iff ring neighbor i >= center, ring order
// clockwise from top-left.
inline unsigned lbp_code(const GrayImage& gray, int y, int x) {
  const std::uint8_t center = gray.at(y, x);
  unsigned code = 0;
  for (int i = 0; i < 8; ++i) {
    const auto [dy, dx] = detail::kLbpRing[i];
    if (gray.at(y + dy, x + dx) >= center) code |= 1u << i;
  }
  return code;
}

// 59-bin uniform LBP histogram over the 126x126 interior, normalized to sum 1.
inline Eigen::VectorXd texture_descriptor(const GrayImage& gray) {
  if (gray.width != kWorkingSize || gray.height != kWorkingSize) {
    throw std::invalid_argument("texture_descriptor expects the 128x128 working image");
  }
  const auto& bins = detail::lbp_bin_table();
  Eigen::VectorXd hist = Eigen::VectorXd::Zero(kTextureDim);
  for (int y = 1; y < gray.height - 1; ++y) {
    for (int x = 1; x < gray.width - 1; ++x) {
      hist[bins[lbp_code(gray, y, x)]] += 1.0;
    }
  }
  hist /= static_cast<double>((gray.height - 2) * (gray.width - 2));
  return hist;
}

struct Gradient {
  double gx = 0;
  double gy = 0;
};

inline Gradient sobel_at(const GrayImage& g, int y, int x) {
  const auto p = [&](int dy, int dx) { return static_cast<double>(g.at(y + dy, x + dx)); };
  Gradient out;
  out.gx = (p(-1, 1) + 2 * p(0, 1) + p(1, 1)) - (p(-1, -1) + 2 * p(0, -1) + p(1, -1));
  out.gy = (p(1, -1) + 2 * p(1, 0) + p(1, 1)) - (p(-1, -1) + 2 * p(-1, 0) + p(-1, 1));
  return out;
}

constexpr double kEdgeMagnitudeThreshold = 16.0;

// 36-bin edge-orientation histogram from 3x3 Sobel gradients over interior
// pixels. Pixels with gradient magnitude <= 16 are ignored; if nothing
// qualifies the histogram falls back to uniform 1/36.
inline Eigen::VectorXd shape_descriptor(const GrayImage& gray) {
  if (gray.width != kWorkingSize || gray.height != kWorkingSize) {
    throw std::invalid_argument("shape_descriptor expects the 128x128 working image");
  }
  Eigen::VectorXd hist = Eigen::VectorXd::Zero(kShapeDim);
  double count = 0;
  for (int y = 1; y < gray.height - 1; ++y) {
    for (int x = 1; x < gray.width - 1; ++x) {
      const Gradient grad = sobel_at(gray, y, x);
      const double mag = std::hypot(grad.gx, grad.gy);
      if (mag <= kEdgeMagnitudeThreshold) continue;
      double deg = std::atan2(grad.gy, grad.gx) * 180.0 / M_PI;
      if (deg < 0) deg += 360.0;
      hist[quantize(deg, 360.0, kShapeDim)] += 1.0;
      count += 1.0;
    }
  }
  if (count == 0) {
    hist.setConstant(1.0 / kShapeDim);
  } else {
    hist /= count;
  }
  return hist;
}

// color || texture || shape, dimension 167, each block sum-normalized.
inline Eigen::VectorXd feature_blocks(const Image& rgb128, const GrayImage& gray128) {
  Eigen::VectorXd v(kFeatureDim);
  v.segment(kColorOffset, kColorDim) = color_histogram(rgb128);
  v.segment(kTextureOffset, kTextureDim) = texture_descriptor(gray128);
  v.segment(kShapeOffset, kShapeDim) = shape_descriptor(gray128);
  return v;
}

}  // namespace imgrank
