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

#ifndef NIRC_MODEL_HPP_
#define NIRC_MODEL_HPP_

#include <vector>

#include "nirc/layers.hpp"
#include "nirc/preprocess.hpp"
#include "nirc/topology.hpp"

namespace nirc {

// Per-scale branches plus the fully-connected fusion/output layer. Branches
// are structurally identical but never share weights. `window` records the
// normalization neighborhood the model expects at inference time.
template <typename S>
struct Model {
  TopologySpec spec;
  int window = 33;
  bool level0_bypass_only = false;
  std::vector<std::vector<ConvParams<S>>> branches;  // [n_l][n_c]
  FcParams<S> fusion;

  int bypass_count() const {
    return spec.bypass ? (level0_bypass_only ? 1 : spec.n_l) : 0;
  }
};

template <typename S>
struct ModelGrads {
  std::vector<std::vector<ConvGrads<S>>> branches;
  FcGrads<S> fusion;

  void add(const ModelGrads<S>& o) {
    for (std::size_t l = 0; l < branches.size(); ++l)
      for (std::size_t i = 0; i < branches[l].size(); ++i) {
        branches[l][i].weights += o.branches[l][i].weights;
        branches[l][i].bias += o.branches[l][i].bias;
      }
    fusion.weights += o.fusion.weights;
    fusion.bias += o.fusion.bias;
  }
  void set_zero() {
    for (auto& branch : branches)
      for (auto& g : branch) {
        g.weights.setZero();
        g.bias.setZero();
      }
    fusion.weights.setZero();
    fusion.bias.setZero();
  }
};

// Saved forward activations of one branch, for backpropagation.
template <typename S>
struct BranchTrace {
  std::vector<Tensor<S>> conv_in;             // input of each convolution
  std::vector<Tensor<S>> conv_out;            // pre-ReLU output of each
  std::vector<std::vector<int64_t>> pool_argmax;
  std::vector<std::pair<int, int>> pool_in_hw;
};

template <typename S>
struct ModelTrace {
  std::vector<BranchTrace<S>> branches;
  VectorX<S> fusion_in;
};

template <typename S>
Model<S> build_model(const TopologySpec& spec, uint64_t seed, int window = 33,
                     InitScheme scheme = InitScheme::kFanIn,
                     bool level0_bypass_only = false) {
  spec.validate();
  Model<S> m;
  m.spec = spec;
  m.window = window;
  m.level0_bypass_only = level0_bypass_only;
  auto rng = make_engine(seed, 'M');
  const int per_block = spec.convs_per_block();
  m.branches.resize(spec.n_l);
  for (int l = 0; l < spec.n_l; ++l) {
    int in_ch = 1;
    for (int b = 0; b <= spec.n_p; ++b) {
      const int out_ch = spec.block_channels(b);
      for (int i = 0; i < per_block; ++i) {
        m.branches[l].push_back(make_conv<S>(out_ch, in_ch, spec.n_k, rng, scheme));
        in_ch = out_ch;
      }
    }
  }
  m.fusion = make_fc<S>(3, spec.fusion_inputs(level0_bypass_only), rng, scheme);
  return m;
}

template <typename S>
ModelGrads<S> make_grads(const Model<S>& m) {
  ModelGrads<S> g;
  g.branches.resize(m.branches.size());
  for (std::size_t l = 0; l < m.branches.size(); ++l)
    for (const auto& p : m.branches[l])
      g.branches[l].push_back(
          {MatrixX<S>::Zero(p.weights.rows(), p.weights.cols()),
           VectorX<S>::Zero(p.bias.size())});
  g.fusion.weights =
      MatrixX<S>::Zero(m.fusion.weights.rows(), m.fusion.weights.cols());
  g.fusion.bias = VectorX<S>::Zero(m.fusion.bias.size());
  return g;
}

// Conv blocks with ReLU after every convolution and a 2x2 pool between
// blocks; returns the flattened final feature map (1x1 spatially on
// roi-sized inputs).
template <typename S>
VectorX<S> branch_forward(const std::vector<ConvParams<S>>& branch,
                          const TopologySpec& spec, const Tensor<S>& patch,
                          BranchTrace<S>* trace = nullptr) {
  const int per_block = spec.convs_per_block();
  Tensor<S> x = patch;
  int conv_idx = 0;
  for (int b = 0; b <= spec.n_p; ++b) {
    for (int i = 0; i < per_block; ++i, ++conv_idx) {
      if (trace) trace->conv_in.push_back(x);
      Tensor<S> pre = conv_forward(x, branch[conv_idx]);
      if (trace) trace->conv_out.push_back(pre);
      x = relu(pre);
    }
    if (b < spec.n_p) {
      if (trace) {
        trace->pool_in_hw.emplace_back(x.height, x.width);
        trace->pool_argmax.emplace_back();
        x = maxpool2(x, &trace->pool_argmax.back());
      } else {
        x = maxpool2(x);
      }
    }
  }
  return x.data;
}

// Multi-scale forward for one patch set; output is the (linear) RGB triple.
template <typename S>
VectorX<S> model_forward(const Model<S>& m, const MultiScalePatch& patch,
                         ModelTrace<S>* trace = nullptr) {
  if (static_cast<int>(patch.patches.size()) != m.spec.n_l)
    throw std::invalid_argument("model_forward: patch scale count mismatch");
  VectorX<S> fusion_in(m.fusion.weights.cols());
  Eigen::Index off = 0;
  if (trace) trace->branches.resize(m.spec.n_l);
  for (int l = 0; l < m.spec.n_l; ++l) {
    const Tensor<S> x = tensor_from_patch<S>(patch.patches[l]);
    VectorX<S> feat = branch_forward(m.branches[l], m.spec, x,
                                     trace ? &trace->branches[l] : nullptr);
    fusion_in.segment(off, feat.size()) = feat;
    off += feat.size();
  }
  for (int i = 0; i < m.bypass_count(); ++i)
    fusion_in[off + i] = static_cast<S>(patch.bypass[i]);
  if (trace) trace->fusion_in = fusion_in;
  return fc_forward(fusion_in, m.fusion);
}

template <typename S>
void branch_backward(const std::vector<ConvParams<S>>& branch,
                     const TopologySpec& spec, const BranchTrace<S>& trace,
                     const VectorX<S>& gfeat,
                     std::vector<ConvGrads<S>>& grads) {
  const int per_block = spec.convs_per_block();
  Tensor<S> g(spec.branch_channels(), 1, 1);
  g.data = gfeat;
  int conv_idx = spec.n_c - 1;
  int pool_idx = spec.n_p - 1;
  for (int b = spec.n_p; b >= 0; --b) {
    if (b < spec.n_p) {
      g = maxpool2_backward(trace.pool_argmax[pool_idx], g,
                            trace.pool_in_hw[pool_idx].first,
                            trace.pool_in_hw[pool_idx].second);
      --pool_idx;
    }
    for (int i = 0; i < per_block; ++i, --conv_idx) {
      g = relu_backward(trace.conv_out[conv_idx], g);
      Tensor<S> gx;
      conv_backward(trace.conv_in[conv_idx], branch[conv_idx], g, grads[conv_idx],
                    conv_idx > 0 ? &gx : nullptr);
      if (conv_idx > 0) g = std::move(gx);
    }
  }
}

// Backpropagates d(loss)/d(output) through fusion and every branch,
// accumulating parameter gradients. Bypass inputs are data, not parameters;
// their gradients are dropped.
template <typename S>
void model_backward(const Model<S>& m, const ModelTrace<S>& trace,
                    const VectorX<S>& gout, ModelGrads<S>& grads) {
  const VectorX<S> gin = fc_backward(trace.fusion_in, m.fusion, gout, grads.fusion);
  const Eigen::Index c = m.spec.branch_channels();
  for (int l = 0; l < m.spec.n_l; ++l)
    branch_backward(m.branches[l], m.spec, trace.branches[l],
                    VectorX<S>(gin.segment(l * c, c)), grads.branches[l]);
}

template <typename S>
void sgd_step(Model<S>& m, const ModelGrads<S>& g, S lr, S momentum) {
  for (std::size_t l = 0; l < m.branches.size(); ++l)
    for (std::size_t i = 0; i < m.branches[l].size(); ++i)
      sgd_step(m.branches[l][i], g.branches[l][i], lr, momentum);
  sgd_step(m.fusion, g.fusion, lr, momentum);
}

}  // namespace nirc

#endif  // NIRC_MODEL_HPP_
