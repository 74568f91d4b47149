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

#ifndef NIRC_PREPROCESS_HPP_
#define NIRC_PREPROCESS_HPP_

#include <vector>

#include "nirc/image.hpp"

namespace nirc {

// Local zero-mean/unit-variance split of an image:
//   mean    = windowed box mean
//   std     = windowed standard deviation (population)
//   texture = (img - mean) / (std + epsilon)
//   detail  = texture * std
// so that mean + texture * (std + epsilon) reconstructs the source exactly.
struct Decomposition {
  Image mean;
  Image std;
  Image texture;
  Image detail;
  int window = 33;
  float epsilon = 1e-4f;
};

// Image pyramid; level 0 is full resolution, each further level is the 2x2
// block average at exactly half the previous dimensions.
struct Pyramid {
  std::vector<Image> levels;
};

// One pyramid level per scale, each decomposed independently with the same
// window in its own pixel units.
struct DecompositionPyramid {
  std::vector<Decomposition> levels;
  int width() const { return levels.front().mean.width; }
  int height() const { return levels.front().mean.height; }
};

// Aligned multi-scale network input for one level-0 pixel: a square texture
// patch per scale plus the local-mean value at each scale's mapped center.
struct MultiScalePatch {
  std::vector<Image> patches;       // one roi x roi single-channel patch per scale
  std::vector<float> bypass;        // local mean at each mapped center
  int center_x = 0, center_y = 0;   // level-0 coordinates
};

// Largest (w, h) <= (img.width, img.height) divisible by 2^(n_levels-1).
// Throws if no positive size exists.
Image crop_to_pyramid(const Image& img, int n_levels);

// Exact-halving pyramid. Dimensions must be divisible by 2^(n_levels-1);
// callers with odd sizes crop first via crop_to_pyramid.
Pyramid build_pyramid(const Image& img, int n_levels);

// Windowed normalization with mirrored borders. window odd >= 3 and not
// larger than the image; epsilon > 0.
Decomposition decompose(const Image& img, int window, float epsilon);

// Pyramid + per-level decomposition, the standard network preprocessing.
DecompositionPyramid preprocess_pyramid(const Image& img, int n_levels,
                                        int window, float epsilon);

// Texture patch of side roi at floor(center / 2^l) per level, mirrored
// padding by roi/2, plus the per-level bypass means. With level0_bypass_only
// the bypass list holds just the level-0 value.
MultiScalePatch extract_patch(const DecompositionPyramid& pyr, int center_x,
                              int center_y, int roi,
                              bool level0_bypass_only = false);

}  // namespace nirc

#endif  // NIRC_PREPROCESS_HPP_
