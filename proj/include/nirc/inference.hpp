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

#ifndef NIRC_INFERENCE_HPP_
#define NIRC_INFERENCE_HPP_

#include "nirc/image.hpp"
#include "nirc/model.hpp"
#include "nirc/parallel.hpp"

namespace nirc {

// Raw dense network output before any postprocessing. Dense per-pixel
// evaluation interleaves 2^n_p-strided coherent maps, so the image carries
// checkerboard noise with period `gap`.
struct RawEstimate {
  Image image;  // 3-channel, same dimensions as the input
  TopologySpec spec;
  int gap = 1;
};

// Shifted dense passes needed per branch to cover every pixel: gap^2.
int dense_passes_per_branch(const TopologySpec& spec);

// Reference path: preprocess, then evaluate the model on the extracted
// multi-scale patch of every single pixel. Output resolution equals input
// resolution via mirrored padding of the texture pyramid.
RawEstimate colorize_raw(const Model<float>& model, const Image& nir,
                         int window, float epsilon,
                         int threads = default_threads());

// Interleaved path: gap^2 shifted whole-image passes per branch, stitched
// back together. Agrees with colorize_raw within float reassociation noise
// (<= 1e-5 per sample).
RawEstimate colorize_raw_fast(const Model<float>& model, const Image& nir,
                              int window, float epsilon,
                              int threads = default_threads());

}  // namespace nirc

#endif  // NIRC_INFERENCE_HPP_
