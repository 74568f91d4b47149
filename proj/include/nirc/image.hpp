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

#ifndef NIRC_IMAGE_HPP_
#define NIRC_IMAGE_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nirc {

// Row-major, channel-interleaved raster of float samples on the [0,1] scale.
// Samples may transiently leave [0,1] mid-pipeline (normalized texture,
// detail layers); clamp_unit() restores the invariant.
struct Image {
  int width = 0;
  int height = 0;
  int channels = 1;  // 1 (gray) or 3 (RGB)
  std::vector<float> data;

  Image() = default;
  Image(int w, int h, int c, float fill = 0.0f)
      : width(w), height(h), channels(c),
        data(static_cast<std::size_t>(w) * h * c, fill) {
    if (w <= 0 || h <= 0 || (c != 1 && c != 3))
      throw std::invalid_argument("Image: bad shape " + std::to_string(w) + "x" +
                                  std::to_string(h) + "x" + std::to_string(c));
  }

  float& at(int x, int y, int c) {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  float at(int x, int y, int c) const {
    return data[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }

  std::size_t sample_count() const { return data.size(); }
  bool same_shape(const Image& o) const {
    return width == o.width && height == o.height && channels == o.channels;
  }
};

// Mirrors i into [0, n) with edge-inclusive (symmetric) reflection. Valid for
// any i, any pad width; a 1-sample axis reflects onto itself.
inline int mirror_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * n;
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

// Elementwise product. Shapes must match.
Image hadamard(const Image& a, const Image& b);

// Returns a copy with every sample clamped to [0,1].
Image clamp_unit(Image img);

// Center crop to new_w x new_h (both <= current size). Odd leftovers favor
// the top-left, matching the pyramid crop helper contract.
Image crop_center(const Image& img, int new_w, int new_h);

// Per-channel box mean over an odd square window with mirrored borders.
// Accumulation runs in double so a 33x33 sum keeps float-level accuracy.
Image box_mean(const Image& img, int window);

}  // namespace nirc

#endif  // NIRC_IMAGE_HPP_
