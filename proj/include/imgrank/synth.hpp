#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "imgrank/image.hpp"

namespace imgrank {

// Stand-in corpus generator: one color/stripe prototype per class, per-image
// pixel noise on top, written as directory-per-class 24-bit BMPs. All draws
// come from one sequential seeded generator, so a seed fixes every byte.
struct SynthOptions {
  int classes = 20;
  int per_class = 50;
  std::uint64_t seed = 42;
};

namespace detail {

inline double unit_draw(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
}

inline Rgb hsv_to_rgb(double h, double s, double v) {
  const double c = v * s;
  const double hp = h / 60.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  if (hp < 1) {
    r = c; g = x;
  } else if (hp < 2) {
    r = x; g = c;
  } else if (hp < 3) {
    g = c; b = x;
  } else if (hp < 4) {
    g = x; b = c;
  } else if (hp < 5) {
    r = x; b = c;
  } else {
    r = c; b = x;
  }
  const double m = v - c;
  const auto to_byte = [](double u) {
    return static_cast<std::uint8_t>(std::clamp(std::lround(u * 255.0), 0L, 255L));
  };
  return Rgb{to_byte(r + m), to_byte(g + m), to_byte(b + m)};
}

struct ClassPrototype {
  Rgb base;
  double theta;      // stripe direction, radians
  double frequency;  // stripe cycles across the image
};

// Hues and stripe orientations are stratified over their ranges by class
// index (with jitter) so prototypes stay well separated; frequency is a free
// draw. The feature blocks then all discriminate: color by hue, texture and
// shape by the stripes.
inline ClassPrototype draw_prototype(int cls, int n_classes, std::mt19937_64& rng) {
  ClassPrototype p;
  const double hue = (cls + 0.25 + 0.5 * unit_draw(rng)) * 360.0 / n_classes;
  const double sat = 0.65 + 0.3 * unit_draw(rng);
  const double val = 0.7 + 0.25 * unit_draw(rng);
  p.base = hsv_to_rgb(std::fmod(hue, 360.0), sat, val);
  const int slot = (cls * 7 + 3) % n_classes;
  p.theta = (slot + 0.2 + 0.6 * unit_draw(rng)) / n_classes * M_PI;
  p.frequency = 2.0 + static_cast<double>(rng() % 7);
  return p;
}

inline Image render_image(const ClassPrototype& proto, std::mt19937_64& rng) {
  Image img(kWorkingSize, kWorkingSize);
  const double cos_t = std::cos(proto.theta);
  const double sin_t = std::sin(proto.theta);
  for (int y = 0; y < kWorkingSize; ++y) {
    for (int x = 0; x < kWorkingSize; ++x) {
      const double phase =
          2.0 * M_PI * proto.frequency * (x * cos_t + y * sin_t) / kWorkingSize;
      const double bright = std::sin(phase) >= 0 ? 1.0 : 0.55;
      const auto channel = [&](std::uint8_t base) {
        const long jitter = static_cast<long>(rng() % 41) - 20;
        return static_cast<std::uint8_t>(
            std::clamp(std::lround(base * bright) + jitter, 0L, 255L));
      };
      img.at(y, x) = Rgb{channel(proto.base.r), channel(proto.base.g), channel(proto.base.b)};
    }
  }
  return img;
}

inline std::string zero_pad(int value, int width) {
  std::string s = std::to_string(value);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

}  // namespace detail

inline void generate_corpus(const std::string& out_dir, const SynthOptions& opt) {
  namespace fs = std::filesystem;
  if (opt.classes < 1 || opt.per_class < 1) {
    throw std::invalid_argument("generate_corpus: classes and per_class must be >= 1");
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw std::runtime_error("cannot create output directory: " + out_dir);
  }

  std::mt19937_64 rng(opt.seed);
  for (int cls = 0; cls < opt.classes; ++cls) {
    const detail::ClassPrototype proto = detail::draw_prototype(cls, opt.classes, rng);
    const fs::path dir = fs::path(out_dir) / ("class" + detail::zero_pad(cls, 3));
    fs::create_directories(dir, ec);
    if (ec) {
      throw std::runtime_error("cannot create class directory: " + dir.string());
    }
    for (int i = 0; i < opt.per_class; ++i) {
      const Image img = detail::render_image(proto, rng);
      write_bmp((dir / ("img" + detail::zero_pad(i, 4) + ".bmp")).string(), img);
    }
  }
}

}  // namespace imgrank
