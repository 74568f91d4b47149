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

#include "nirc/image.hpp"

#include <algorithm>
#include <cmath>

namespace nirc {

Image hadamard(const Image& a, const Image& b) {
  if (!a.same_shape(b))
    throw std::invalid_argument("hadamard: shape mismatch");
  Image out = a;
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] *= b.data[i];
  return out;
}

Image clamp_unit(Image img) {
  for (float& v : img.data) v = std::clamp(v, 0.0f, 1.0f);
  return img;
}

Image crop_center(const Image& img, int new_w, int new_h) {
  if (new_w <= 0 || new_h <= 0 || new_w > img.width || new_h > img.height)
    throw std::invalid_argument("crop_center: target exceeds source");
  const int x0 = (img.width - new_w) / 2;
  const int y0 = (img.height - new_h) / 2;
  Image out(new_w, new_h, img.channels);
  for (int y = 0; y < new_h; ++y)
    for (int x = 0; x < new_w; ++x)
      for (int c = 0; c < img.channels; ++c)
        out.at(x, y, c) = img.at(x0 + x, y0 + y, c);
  return out;
}

namespace {

// Horizontal box sum of one channel into a double buffer, mirrored borders.
void box_pass_x(const std::vector<double>& src, std::vector<double>& dst,
                int w, int h, int r) {
  for (int y = 0; y < h; ++y) {
    const double* row = src.data() + static_cast<std::size_t>(y) * w;
    double* out = dst.data() + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int k = -r; k <= r; ++k) s += row[mirror_index(x + k, w)];
      out[x] = s;
    }
  }
}

void box_pass_y(const std::vector<double>& src, std::vector<double>& dst,
                int w, int h, int r) {
  for (int y = 0; y < h; ++y) {
    double* out = dst.data() + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int k = -r; k <= r; ++k)
        s += src[static_cast<std::size_t>(mirror_index(y + k, h)) * w + x];
      out[x] = s;
    }
  }
}

}  // namespace

Image box_mean(const Image& img, int window) {
  if (window < 3 || window % 2 == 0)
    throw std::invalid_argument("box_mean: window must be odd and >= 3");
  if (window > img.width || window > img.height)
    throw std::invalid_argument("box_mean: window larger than image");
  const int r = window / 2;
  const double inv = 1.0 / (static_cast<double>(window) * window);
  Image out(img.width, img.height, img.channels);
  std::vector<double> plane(static_cast<std::size_t>(img.width) * img.height);
  std::vector<double> tmp(plane.size());
  std::vector<double> acc(plane.size());
  for (int c = 0; c < img.channels; ++c) {
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x)
        plane[static_cast<std::size_t>(y) * img.width + x] = img.at(x, y, c);
    box_pass_x(plane, tmp, img.width, img.height, r);
    box_pass_y(tmp, acc, img.width, img.height, r);
    for (int y = 0; y < img.height; ++y)
      for (int x = 0; x < img.width; ++x)
        out.at(x, y, c) = static_cast<float>(
            acc[static_cast<std::size_t>(y) * img.width + x] * inv);
  }
  return out;
}

}  // namespace nirc
