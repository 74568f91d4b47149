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

#include "nirc/preprocess.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nirc {

Image crop_to_pyramid(const Image& img, int n_levels) {
  if (n_levels < 1 || n_levels > 5)
    throw std::invalid_argument("crop_to_pyramid: level count must be in [1,5]");
  const int f = 1 << (n_levels - 1);
  const int w = (img.width / f) * f;
  const int h = (img.height / f) * f;
  if (w == 0 || h == 0)
    throw std::invalid_argument("crop_to_pyramid: image smaller than 2^(n_l-1)");
  if (w == img.width && h == img.height) return img;
  return crop_center(img, w, h);
}

Pyramid build_pyramid(const Image& img, int n_levels) {
  if (n_levels < 1 || n_levels > 5)
    throw std::invalid_argument("build_pyramid: level count must be in [1,5]");
  const int f = 1 << (n_levels - 1);
  if (img.width % f != 0 || img.height % f != 0)
    throw std::invalid_argument(
        "build_pyramid: dimensions not divisible by 2^(n_l-1); crop first "
        "(crop_to_pyramid)");
  Pyramid pyr;
  pyr.levels.push_back(img);
  for (int l = 1; l < n_levels; ++l) {
    const Image& prev = pyr.levels.back();
    Image next(prev.width / 2, prev.height / 2, prev.channels);
    for (int y = 0; y < next.height; ++y)
      for (int x = 0; x < next.width; ++x)
        for (int c = 0; c < prev.channels; ++c) {
          const double s = static_cast<double>(prev.at(2 * x, 2 * y, c)) +
                           prev.at(2 * x + 1, 2 * y, c) +
                           prev.at(2 * x, 2 * y + 1, c) +
                           prev.at(2 * x + 1, 2 * y + 1, c);
          next.at(x, y, c) = static_cast<float>(s * 0.25);
        }
    pyr.levels.push_back(std::move(next));
  }
  return pyr;
}

Decomposition decompose(const Image& img, int window, float epsilon) {
  if (window < 3 || window % 2 == 0)
    throw std::invalid_argument("decompose: window must be odd and >= 3");
  if (window > img.width || window > img.height)
    throw std::invalid_argument("decompose: window larger than image");
  if (!(epsilon > 0.0f))
    throw std::invalid_argument("decompose: epsilon must be positive");

  Decomposition dec;
  dec.window = window;
  dec.epsilon = epsilon;
  dec.mean = box_mean(img, window);

  Image squared = img;
  for (float& v : squared.data) v *= v;
  const Image mean_sq = box_mean(squared, window);

  dec.std = Image(img.width, img.height, img.channels);
  dec.texture = Image(img.width, img.height, img.channels);
  dec.detail = Image(img.width, img.height, img.channels);
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    const double m = dec.mean.data[i];
    const double var = std::max(0.0, static_cast<double>(mean_sq.data[i]) - m * m);
    const float sd = static_cast<float>(std::sqrt(var));
    dec.std.data[i] = sd;
    dec.texture.data[i] = (img.data[i] - dec.mean.data[i]) / (sd + epsilon);
    dec.detail.data[i] = dec.texture.data[i] * sd;
  }
  return dec;
}

DecompositionPyramid preprocess_pyramid(const Image& img, int n_levels,
                                        int window, float epsilon) {
  const Pyramid pyr = build_pyramid(img, n_levels);
  DecompositionPyramid out;
  out.levels.reserve(pyr.levels.size());
  for (const Image& level : pyr.levels)
    out.levels.push_back(decompose(level, window, epsilon));
  return out;
}

MultiScalePatch extract_patch(const DecompositionPyramid& pyr, int center_x,
                              int center_y, int roi, bool level0_bypass_only) {
  if (roi < 1) throw std::invalid_argument("extract_patch: roi must be positive");
  MultiScalePatch out;
  out.center_x = center_x;
  out.center_y = center_y;
  const int half = roi / 2;
  for (std::size_t l = 0; l < pyr.levels.size(); ++l) {
    const Image& tex = pyr.levels[l].texture;
    const int cx = center_x >> l;
    const int cy = center_y >> l;
    Image patch(roi, roi, 1);
    for (int py = 0; py < roi; ++py) {
      const int sy = mirror_index(cy - half + py, tex.height);
      for (int px = 0; px < roi; ++px) {
        const int sx = mirror_index(cx - half + px, tex.width);
        patch.at(px, py, 0) = tex.at(sx, sy, 0);
      }
    }
    out.patches.push_back(std::move(patch));
    if (!level0_bypass_only || l == 0)
      out.bypass.push_back(pyr.levels[l].mean.at(cx, cy, 0));
  }
  return out;
}

}  // namespace nirc
