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

#ifndef NIRC_TOPOLOGY_HPP_
#define NIRC_TOPOLOGY_HPP_

#include <stdexcept>
#include <string>
#include <vector>

namespace nirc {

struct TopologyError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Smallest input side that a branch of n_c valid convolutions (kernel n_k,
// grouped into n_p+1 equal blocks) and n_p interleaved 2x2 pools reduces to
// a 1x1 map. Derived by running the size recursion backwards, which also
// guarantees every pre-pool size is even. Throws when n_c is not divisible
// by n_p+1.
int required_roi(int n_c, int n_p, int n_k);

// Product of all layer strides in one branch: convolutions are stride 1,
// each 2x2 pool is stride 2, so the gap is 2^n_p. This is the pixel spacing
// between outputs of the same coherent map under dense evaluation.
int coherence_gap(int n_p);

// One row of the evaluated network family: n_l scales, n_c convolutions and
// n_p poolings per branch, an optional local-mean bypass into the fusion
// layer, kernel side n_k and first-block filter count n_f1.
struct TopologySpec {
  int n_l = 3;
  int n_c = 12;
  int n_p = 3;
  bool bypass = true;
  int n_k = 3;
  int n_f1 = 16;

  // Throws TopologyError when the block structure does not work out.
  void validate() const;

  int convs_per_block() const { return n_c / (n_p + 1); }
  int roi() const { return required_roi(n_c, n_p, n_k); }
  int gap() const { return coherence_gap(n_p); }

  // Filter count of block b (0-based): n_f1 doubled after each pool.
  int block_channels(int b) const { return n_f1 << b; }
  // Channels of the final 1x1 branch feature map.
  int branch_channels() const { return n_f1 << n_p; }

  // Per-layer strides in forward order (1 per convolution, 2 per pool).
  std::vector<int> strides() const;

  // Width of the fusion layer input: concatenated branch features plus the
  // bypass scalars (all scales, or just scale 0 when restricted).
  int fusion_inputs(bool level0_bypass_only = false) const {
    const int bp = bypass ? (level0_bypass_only ? 1 : n_l) : 0;
    return n_l * branch_channels() + bp;
  }

  // e.g. "net-3-12-3-bp".
  std::string name() const;
  static TopologySpec parse(const std::string& name);

  bool operator==(const TopologySpec&) const = default;
};

}  // namespace nirc

#endif  // NIRC_TOPOLOGY_HPP_
