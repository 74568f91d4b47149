// Copyright 2026 The nirc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nirc/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <vector>

namespace nirc {

namespace {

std::string lower_ext(const std::string& path) {
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return "";
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext;
}

// Normalizes raw integer samples into [0,1]. The divisor is the sensor depth
// when given (a 10-bit sample lives in a 16-bit container), else the
// container maximum.
Image normalize_samples(const std::vector<uint32_t>& raw, int w, int h, int ch,
                        uint32_t container_max, std::optional<int> sensor_bits,
                        const std::string& path) {
  uint32_t divisor = container_max;
  if (sensor_bits) {
    if (*sensor_bits < 1 || *sensor_bits > 16)
      throw IoError("load_image: sensor_bits out of range for " + path);
    divisor = (1u << *sensor_bits) - 1u;
  }
  Image img(w, h, ch);
  const float scale = 1.0f / static_cast<float>(divisor);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (sensor_bits && raw[i] > divisor)
      throw IoError("load_image: sample " + std::to_string(raw[i]) +
                    " exceeds 2^" + std::to_string(*sensor_bits) + "-1 in " +
                    path);
    img.data[i] = static_cast<float>(raw[i]) * scale;
  }
  return img;
}

struct PngReadCloser {
  png_structp png = nullptr;
  png_infop info = nullptr;
  FILE* fp = nullptr;
  ~PngReadCloser() {
    if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
    if (fp) std::fclose(fp);
  }
};

Image load_png(const std::string& path, std::optional<int> sensor_bits) {
  PngReadCloser ctx;
  ctx.fp = std::fopen(path.c_str(), "rb");
  if (!ctx.fp) throw IoError("load_image: cannot open " + path);

  unsigned char sig[8];
  if (std::fread(sig, 1, 8, ctx.fp) != 8 || png_sig_cmp(sig, 0, 8))
    throw IoError("load_image: not a PNG file: " + path);

  ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                   nullptr);
  if (!ctx.png) throw IoError("load_image: libpng init failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw IoError("load_image: libpng init failed");
  if (setjmp(png_jmpbuf(ctx.png)))
    throw IoError("load_image: libpng failed reading " + path);

  png_init_io(ctx.png, ctx.fp);
  png_set_sig_bytes(ctx.png, 8);
  png_read_info(ctx.png, ctx.info);

  png_uint_32 w = 0, h = 0;
  int bit_depth = 0, color_type = 0;
  png_get_IHDR(ctx.png, ctx.info, &w, &h, &bit_depth, &color_type, nullptr,
               nullptr, nullptr);

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(ctx.png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
    png_set_expand_gray_1_2_4_to_8(ctx.png);
  png_read_update_info(ctx.png, ctx.info);

  bit_depth = png_get_bit_depth(ctx.png, ctx.info);
  color_type = png_get_color_type(ctx.png, ctx.info);
  const int ch = png_get_channels(ctx.png, ctx.info);
  if (ch != 1 && ch != 3)
    throw IoError("load_image: unsupported channel count " +
                  std::to_string(ch) + " in " + path);

  const std::size_t row_bytes = png_get_rowbytes(ctx.png, ctx.info);
  std::vector<unsigned char> buf(row_bytes * h);
  std::vector<png_bytep> rows(h);
  for (png_uint_32 y = 0; y < h; ++y) rows[y] = buf.data() + y * row_bytes;
  png_read_image(ctx.png, rows.data());
  png_read_end(ctx.png, nullptr);

  std::vector<uint32_t> raw(static_cast<std::size_t>(w) * h * ch);
  if (bit_depth == 16) {
    // PNG stores 16-bit samples big-endian.
    for (std::size_t i = 0; i < raw.size(); ++i)
      raw[i] = (static_cast<uint32_t>(buf[2 * i]) << 8) | buf[2 * i + 1];
  } else {
    for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = buf[i];
  }
  const uint32_t container_max = bit_depth == 16 ? 65535u : 255u;
  return normalize_samples(raw, static_cast<int>(w), static_cast<int>(h), ch,
                           container_max, sensor_bits, path);
}

// Binary PGM (P5) / PPM (P6). Comment lines are honored in the header.
Image load_pnm(const std::string& path, std::optional<int> sensor_bits) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("load_image: cannot open " + path);

  std::string magic;
  in >> magic;
  int ch = 0;
  if (magic == "P5") ch = 1;
  else if (magic == "P6") ch = 3;
  else throw IoError("load_image: unsupported PNM magic '" + magic + "' in " + path);

  auto next_int = [&in, &path]() {
    for (;;) {
      int c = in.peek();
      if (c == '#') {
        std::string line;
        std::getline(in, line);
      } else if (std::isspace(c)) {
        in.get();
      } else {
        break;
      }
    }
    long v = -1;
    in >> v;
    if (!in || v < 0) throw IoError("load_image: malformed PNM header in " + path);
    return static_cast<uint32_t>(v);
  };

  const uint32_t w = next_int();
  const uint32_t h = next_int();
  const uint32_t maxval = next_int();
  if (maxval != 255 && maxval != 65535)
    throw IoError("load_image: unsupported PNM maxval " +
                  std::to_string(maxval) + " in " + path);
  in.get();  // single whitespace after maxval

  const std::size_t n = static_cast<std::size_t>(w) * h * ch;
  const int bytes = maxval == 65535 ? 2 : 1;
  std::vector<unsigned char> buf(n * bytes);
  in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (static_cast<std::size_t>(in.gcount()) != buf.size())
    throw IoError("load_image: truncated PNM payload in " + path);

  std::vector<uint32_t> raw(n);
  if (bytes == 2) {
    // 16-bit PNM samples are big-endian.
    for (std::size_t i = 0; i < n; ++i)
      raw[i] = (static_cast<uint32_t>(buf[2 * i]) << 8) | buf[2 * i + 1];
  } else {
    for (std::size_t i = 0; i < n; ++i) raw[i] = buf[i];
  }
  return normalize_samples(raw, static_cast<int>(w), static_cast<int>(h), ch,
                           maxval, sensor_bits, path);
}

std::vector<uint16_t> quantize(const Image& img, int bits) {
  const uint32_t maxval = (1u << bits) - 1u;
  std::vector<uint16_t> q(img.data.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    const float v = std::clamp(img.data[i], 0.0f, 1.0f);
    q[i] = static_cast<uint16_t>(std::lround(static_cast<double>(v) * maxval));
  }
  return q;
}

struct PngWriteCloser {
  png_structp png = nullptr;
  png_infop info = nullptr;
  FILE* fp = nullptr;
  ~PngWriteCloser() {
    if (png) png_destroy_write_struct(&png, info ? &info : nullptr);
    if (fp) std::fclose(fp);
  }
};

void save_png(const Image& img, const std::string& path, int bits) {
  const auto q = quantize(img, bits);
  PngWriteCloser ctx;
  ctx.fp = std::fopen(path.c_str(), "wb");
  if (!ctx.fp) throw IoError("save_image: cannot open " + path + " for writing");
  ctx.png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr,
                                    nullptr);
  if (!ctx.png) throw IoError("save_image: libpng init failed");
  ctx.info = png_create_info_struct(ctx.png);
  if (!ctx.info) throw IoError("save_image: libpng init failed");
  if (setjmp(png_jmpbuf(ctx.png)))
    throw IoError("save_image: libpng failed writing " + path);

  png_init_io(ctx.png, ctx.fp);
  const int color = img.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB;
  png_set_IHDR(ctx.png, ctx.info, img.width, img.height, bits, color,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(ctx.png, ctx.info);

  const std::size_t samples_per_row =
      static_cast<std::size_t>(img.width) * img.channels;
  std::vector<unsigned char> row(samples_per_row * (bits == 16 ? 2 : 1));
  for (int y = 0; y < img.height; ++y) {
    const uint16_t* src = q.data() + static_cast<std::size_t>(y) * samples_per_row;
    if (bits == 16) {
      for (std::size_t i = 0; i < samples_per_row; ++i) {
        row[2 * i] = static_cast<unsigned char>(src[i] >> 8);
        row[2 * i + 1] = static_cast<unsigned char>(src[i] & 0xff);
      }
    } else {
      for (std::size_t i = 0; i < samples_per_row; ++i)
        row[i] = static_cast<unsigned char>(src[i]);
    }
    png_write_row(ctx.png, row.data());
  }
  png_write_end(ctx.png, nullptr);
}

void save_pnm(const Image& img, const std::string& path, int bits) {
  const auto q = quantize(img, bits);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("save_image: cannot open " + path + " for writing");
  const uint32_t maxval = (1u << bits) - 1u;
  out << (img.channels == 1 ? "P5" : "P6") << "\n"
      << img.width << " " << img.height << "\n"
      << maxval << "\n";
  if (bits == 16) {
    std::vector<unsigned char> buf(q.size() * 2);
    for (std::size_t i = 0; i < q.size(); ++i) {
      buf[2 * i] = static_cast<unsigned char>(q[i] >> 8);
      buf[2 * i + 1] = static_cast<unsigned char>(q[i] & 0xff);
    }
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
  } else {
    std::vector<unsigned char> buf(q.size());
    for (std::size_t i = 0; i < q.size(); ++i)
      buf[i] = static_cast<unsigned char>(q[i]);
    out.write(reinterpret_cast<const char*>(buf.data()),
              static_cast<std::streamsize>(buf.size()));
  }
  if (!out) throw IoError("save_image: write failed for " + path);
}

}  // namespace

Image load_image(const std::string& path, std::optional<int> sensor_bits) {
  const std::string ext = lower_ext(path);
  if (ext == "pgm" || ext == "ppm" || ext == "pnm")
    return load_pnm(path, sensor_bits);
  return load_png(path, sensor_bits);
}

void save_image(const Image& img, const std::string& path, int bits) {
  if (bits != 8 && bits != 16)
    throw IoError("save_image: bits must be 8 or 16");
  for (float v : img.data)
    if (!std::isfinite(v))
      throw IoError("save_image: non-finite sample writing " + path);
  const std::string ext = lower_ext(path);
  if (ext == "pgm" || ext == "ppm" || ext == "pnm") {
    if (ext == "pgm" && img.channels != 1)
      throw IoError("save_image: PGM holds single-channel images: " + path);
    if (ext == "ppm" && img.channels != 3)
      throw IoError("save_image: PPM holds three-channel images: " + path);
    save_pnm(img, path, bits);
  } else if (ext == "png") {
    save_png(img, path, bits);
  } else {
    throw IoError("save_image: unsupported extension in " + path);
  }
}

}  // namespace nirc
