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

#include "nirc/inference.hpp"

#include <vector>

namespace nirc {

namespace {

void check_input(const Model<float>& model, const Image& nir) {
  if (nir.channels != 1)
    throw std::invalid_argument("colorize: input must be single-channel");
  const int f = 1 << (model.spec.n_l - 1);
  if (nir.width % f != 0 || nir.height % f != 0)
    throw std::invalid_argument(
        "colorize: dimensions must be divisible by 2^(n_l-1); crop first "
        "(crop_to_pyramid)");
}

// Mirror-padded copy of one texture level as a 1-channel tensor. Pad width
// roi/2 makes the patch for center c start at padded coordinate c.
Tensor<float> pad_level(const Image& tex, int pad) {
  Tensor<float> out(1, tex.height + 2 * pad, tex.width + 2 * pad);
  for (int y = 0; y < out.height; ++y) {
    const int sy = mirror_index(y - pad, tex.height);
    for (int x = 0; x < out.width; ++x)
      out.at(0, y, x) = tex.at(mirror_index(x - pad, tex.width), sy, 0);
  }
  return out;
}

Tensor<float> subview(const Tensor<float>& t, int y0, int x0) {
  Tensor<float> out(t.channels, t.height - y0, t.width - x0);
  for (int c = 0; c < t.channels; ++c)
    for (int y = 0; y < out.height; ++y)
      for (int x = 0; x < out.width; ++x)
        out.at(c, y, x) = t.at(c, y0 + y, x0 + x);
  return out;
}

// Branch stack over an arbitrarily sized input; pools truncate trailing odd
// fragments, which only ever belong to centers beyond the image.
Tensor<float> dense_branch_stack(const std::vector<ConvParams<float>>& branch,
                                 const TopologySpec& spec, Tensor<float> x) {
  const int per_block = spec.convs_per_block();
  int conv_idx = 0;
  for (int b = 0; b <= spec.n_p; ++b) {
    for (int i = 0; i < per_block; ++i, ++conv_idx)
      x = relu(conv_forward(x, branch[conv_idx]));
    if (b < spec.n_p) x = maxpool2_trunc(x);
  }
  return x;
}

// Planar per-level feature grid, branch_channels() planes of level size.
struct FeatureGrid {
  int channels = 0, height = 0, width = 0;
  std::vector<float> data;
  float at(int c, int y, int x) const {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
  float& at(int c, int y, int x) {
    return data[(static_cast<std::size_t>(c) * height + y) * width + x];
  }
};

}  // namespace

int dense_passes_per_branch(const TopologySpec& spec) {
  const int g = coherence_gap(spec.n_p);
  return g * g;
}

RawEstimate colorize_raw(const Model<float>& model, const Image& nir,
                         int window, float epsilon, int threads) {
  check_input(model, nir);
  const DecompositionPyramid pyr =
      preprocess_pyramid(nir, model.spec.n_l, window, epsilon);
  const int roi = model.spec.roi();

  RawEstimate est;
  est.spec = model.spec;
  est.gap = model.spec.gap();
  est.image = Image(nir.width, nir.height, 3);
  Image& out = est.image;

  parallel_for(nir.height, threads, [&](int y) {
    for (int x = 0; x < nir.width; ++x) {
      const MultiScalePatch patch =
          extract_patch(pyr, x, y, roi, model.level0_bypass_only);
      const VectorX<float> rgb = model_forward(model, patch);
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = rgb[c];
    }
  });
  return est;
}

RawEstimate colorize_raw_fast(const Model<float>& model, const Image& nir,
                              int window, float epsilon, int threads) {
  check_input(model, nir);
  const TopologySpec& spec = model.spec;
  const DecompositionPyramid pyr =
      preprocess_pyramid(nir, spec.n_l, window, epsilon);
  const int roi = spec.roi();
  const int gap = spec.gap();
  const int feat_ch = spec.branch_channels();

  std::vector<FeatureGrid> grids(static_cast<std::size_t>(spec.n_l));
  for (int l = 0; l < spec.n_l; ++l) {
    const Image& tex = pyr.levels[static_cast<std::size_t>(l)].texture;
    FeatureGrid& grid = grids[static_cast<std::size_t>(l)];
    grid.channels = feat_ch;
    grid.height = tex.height;
    grid.width = tex.width;
    grid.data.assign(
        static_cast<std::size_t>(feat_ch) * tex.height * tex.width, 0.0f);

    const Tensor<float> padded = pad_level(tex, roi / 2);
    // Every shift produces the coherent map of one residue class; the
    // classes tile the level, so writes are disjoint across shifts.
    parallel_for(gap * gap, threads, [&](int s) {
      const int sy = s / gap;
      const int sx = s % gap;
      if (sy >= tex.height || sx >= tex.width) return;
      const Tensor<float> feat = dense_branch_stack(
          model.branches[static_cast<std::size_t>(l)], spec,
          subview(padded, sy, sx));
      for (int c = 0; c < feat_ch; ++c)
        for (int i = 0; i < feat.height; ++i) {
          const int y = sy + i * gap;
          if (y >= tex.height) break;
          for (int j = 0; j < feat.width; ++j) {
            const int x = sx + j * gap;
            if (x >= tex.width) break;
            grid.at(c, y, x) = feat.at(c, i, j);
          }
        }
    });
  }

  RawEstimate est;
  est.spec = spec;
  est.gap = gap;
  est.image = Image(nir.width, nir.height, 3);
  Image& out = est.image;
  const int fusion_in = spec.fusion_inputs(model.level0_bypass_only);
  const int bypass_n = model.bypass_count();

  parallel_for(nir.height, threads, [&](int y) {
    MatrixX<float> cols(fusion_in, nir.width);
    for (int x = 0; x < nir.width; ++x) {
      Eigen::Index off = 0;
      for (int l = 0; l < spec.n_l; ++l) {
        const FeatureGrid& grid = grids[static_cast<std::size_t>(l)];
        for (int c = 0; c < feat_ch; ++c, ++off)
          cols(off, x) = grid.at(c, y >> l, x >> l);
      }
      for (int l = 0; l < bypass_n; ++l, ++off)
        cols(off, x) =
            pyr.levels[static_cast<std::size_t>(l)].mean.at(x >> l, y >> l, 0);
    }
    MatrixX<float> rgb = model.fusion.weights * cols;
    rgb.colwise() += model.fusion.bias;
    for (int x = 0; x < nir.width; ++x)
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = rgb(c, x);
  });
  return est;
}

}  // namespace nirc
