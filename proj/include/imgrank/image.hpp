#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <jpeglib.h>
#include <png.h>

namespace imgrank {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Row-major RGB raster. at(y, x) with y running top to bottom.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<Rgb> pixels;

  Image() = default;
  Image(int w, int h, Rgb fill = {}) : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

  Rgb& at(int y, int x) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  const Rgb& at(int y, int x) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

// Row-major 8-bit grayscale raster.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

  std::uint8_t& at(int y, int x) { return pixels[static_cast<std::size_t>(y) * width + x]; }
  std::uint8_t at(int y, int x) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

namespace detail {

inline void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

inline void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xff));
}

inline std::uint16_t get_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

inline std::uint32_t get_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

struct JpegErrorTrap {
  jpeg_error_mgr mgr;
  std::jmp_buf jump;
};

inline void jpeg_error_exit_trap(j_common_ptr cinfo) {
  auto* trap = reinterpret_cast<JpegErrorTrap*>(cinfo->err);
  std::longjmp(trap->jump, 1);
}

}  // namespace detail

// 24-bit uncompressed BMP (BITMAPINFOHEADER, bottom-up, BGR). Deterministic
// byte output so identical images serialize identically.
inline void write_bmp(const std::string& path, const Image& img) {
  if (img.width <= 0 || img.height <= 0) {
    throw std::invalid_argument("write_bmp: empty image");
  }
  const int stride = (img.width * 3 + 3) / 4 * 4;
  const std::uint32_t data_size = static_cast<std::uint32_t>(stride) * img.height;
  std::vector<std::uint8_t> out;
  out.reserve(54 + data_size);
  out.push_back('B');
  out.push_back('M');
  detail::put_u32(out, 54 + data_size);
  detail::put_u32(out, 0);
  detail::put_u32(out, 54);
  detail::put_u32(out, 40);
  detail::put_u32(out, static_cast<std::uint32_t>(img.width));
  detail::put_u32(out, static_cast<std::uint32_t>(img.height));
  detail::put_u16(out, 1);
  detail::put_u16(out, 24);
  detail::put_u32(out, 0);
  detail::put_u32(out, data_size);
  detail::put_u32(out, 2835);
  detail::put_u32(out, 2835);
  detail::put_u32(out, 0);
  detail::put_u32(out, 0);
  for (int y = img.height - 1; y >= 0; --y) {
    for (int x = 0; x < img.width; ++x) {
      const Rgb& p = img.at(y, x);
      out.push_back(p.b);
      out.push_back(p.g);
      out.push_back(p.r);
    }
    for (int pad = img.width * 3; pad < stride; ++pad) out.push_back(0);
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
  if (!f) {
    throw std::runtime_error("write failed: " + path);
  }
}

inline Image read_bmp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("cannot open: " + path);
  }
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (data.size() < 54 || data[0] != 'B' || data[1] != 'M') {
    throw std::runtime_error("not a BMP file: " + path);
  }
  const std::uint32_t offset = detail::get_u32(&data[10]);
  const std::uint32_t header = detail::get_u32(&data[14]);
  const std::int32_t width = static_cast<std::int32_t>(detail::get_u32(&data[18]));
  std::int32_t height = static_cast<std::int32_t>(detail::get_u32(&data[22]));
  const std::uint16_t bpp = detail::get_u16(&data[28]);
  const std::uint32_t compression = detail::get_u32(&data[30]);
  if (header < 40 || bpp != 24 || compression != 0) {
    throw std::runtime_error("unsupported BMP variant (need 24-bit uncompressed): " + path);
  }
  const bool top_down = height < 0;
  if (top_down) height = -height;
  if (width <= 0 || height <= 0) {
    throw std::runtime_error("bad BMP dimensions: " + path);
  }
  const std::size_t stride = (static_cast<std::size_t>(width) * 3 + 3) / 4 * 4;
  if (data.size() < offset + stride * static_cast<std::size_t>(height)) {
    throw std::runtime_error("truncated BMP: " + path);
  }
  Image img(width, height);
  for (int row = 0; row < height; ++row) {
    const int y = top_down ? row : height - 1 - row;
    const std::uint8_t* src = data.data() + offset + stride * static_cast<std::size_t>(row);
    for (int x = 0; x < width; ++x) {
      img.at(y, x) = Rgb{src[x * 3 + 2], src[x * 3 + 1], src[x * 3 + 0]};
    }
  }
  return img;
}

inline Image read_png(const std::string& path) {
  png_image png;
  std::memset(&png, 0, sizeof(png));
  png.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_file(&png, path.c_str())) {
    throw std::runtime_error("PNG decode failed: " + path);
  }
  png.format = PNG_FORMAT_RGB;
  std::vector<std::uint8_t> buffer(PNG_IMAGE_SIZE(png));
  if (!png_image_finish_read(&png, nullptr, buffer.data(), 0, nullptr)) {
    png_image_free(&png);
    throw std::runtime_error("PNG decode failed: " + path);
  }
  Image img(static_cast<int>(png.width), static_cast<int>(png.height));
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    img.pixels[i] = Rgb{buffer[i * 3], buffer[i * 3 + 1], buffer[i * 3 + 2]};
  }
  return img;
}

inline Image read_jpeg(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "rb");
  if (!f) {
    throw std::runtime_error("cannot open: " + path);
  }
  jpeg_decompress_struct cinfo;
  detail::JpegErrorTrap trap;
  cinfo.err = jpeg_std_error(&trap.mgr);
  trap.mgr.error_exit = detail::jpeg_error_exit_trap;
  Image img;
  if (setjmp(trap.jump)) {
    jpeg_destroy_decompress(&cinfo);
    std::fclose(f);
    throw std::runtime_error("JPEG decode failed: " + path);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, f);
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  img = Image(static_cast<int>(cinfo.output_width), static_cast<int>(cinfo.output_height));
  std::vector<std::uint8_t> row(static_cast<std::size_t>(cinfo.output_width) * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    const int y = static_cast<int>(cinfo.output_scanline);
    JSAMPROW rows[1] = {row.data()};
    jpeg_read_scanlines(&cinfo, rows, 1);
    for (int x = 0; x < img.width; ++x) {
      const std::size_t base = static_cast<std::size_t>(x) * 3;
      img.at(y, x) = Rgb{row[base], row[base + 1], row[base + 2]};
    }
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  std::fclose(f);
  return img;
}

inline std::string lowercase_extension(const std::string& path) {
  const std::size_t dot = path.find_last_of('.');
  if (dot == std::string::npos) return "";
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

inline bool has_raster_extension(const std::string& path) {
  const std::string ext = lowercase_extension(path);
  return ext == "png" || ext == "jpg" || ext == "jpeg" || ext == "bmp";
}

inline Image read_image(const std::string& path) {
  const std::string ext = lowercase_extension(path);
  if (ext == "bmp") return read_bmp(path);
  if (ext == "png") return read_png(path);
  if (ext == "jpg" || ext == "jpeg") return read_jpeg(path);
  throw std::runtime_error("unrecognized raster extension: " + path);
}

constexpr int kWorkingSize = 128;

// Nearest-neighbor resample to the fixed working size, pixel-center rule.
inline Image resample_working(const Image& src) {
  if (src.width < 3 || src.height < 3) {
    throw std::invalid_argument("image must be at least 3x3");
  }
  Image dst(kWorkingSize, kWorkingSize);
  for (int y = 0; y < kWorkingSize; ++y) {
    int sy = static_cast<int>((y + 0.5) * src.height / kWorkingSize);
    sy = std::min(sy, src.height - 1);
    for (int x = 0; x < kWorkingSize; ++x) {
      int sx = static_cast<int>((x + 0.5) * src.width / kWorkingSize);
      sx = std::min(sx, src.width - 1);
      dst.at(y, x) = src.at(sy, sx);
    }
  }
  return dst;
}

// luma = round(0.299 R + 0.587 G + 0.114 B), clamped to [0, 255]
inline std::uint8_t luma(Rgb p) {
  const double v = 0.299 * p.r + 0.587 * p.g + 0.114 * p.b;
  return static_cast<std::uint8_t>(std::clamp<long>(std::lround(v), 0, 255));
}

inline GrayImage to_gray(const Image& img) {
  GrayImage g(img.width, img.height);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    g.pixels[i] = luma(img.pixels[i]);
  }
  return g;
}

struct Preprocessed {
  Image rgb;
  GrayImage gray;
};

inline Preprocessed preprocess(const Image& src) {
  Preprocessed out;
  out.rgb = resample_working(src);
  out.gray = to_gray(out.rgb);
  return out;
}

}  // namespace imgrank
