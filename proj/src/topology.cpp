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

#include "nirc/topology.hpp"

#include <charconv>

namespace nirc {

int required_roi(int n_c, int n_p, int n_k) {
  if (n_c < 1 || n_p < 0 || n_k < 1)
    throw TopologyError("required_roi: counts must be positive");
  if (n_c % (n_p + 1) != 0)
    throw TopologyError("required_roi: n_c=" + std::to_string(n_c) +
                        " not divisible into " + std::to_string(n_p + 1) +
                        " equal blocks");
  const int per_block = n_c / (n_p + 1);
  // Backwards from the 1x1 output: undo each block's convolutions, then the
  // pool in front of it. Doubling keeps every pre-pool size even.
  int side = 1;
  for (int b = n_p; b >= 0; --b) {
    side += per_block * (n_k - 1);
    if (b > 0) side *= 2;
  }
  return side;
}

int coherence_gap(int n_p) {
  if (n_p < 0) throw TopologyError("coherence_gap: n_p must be >= 0");
  return 1 << n_p;
}

void TopologySpec::validate() const {
  if (n_l < 1 || n_l > 5)
    throw TopologyError("topology: n_l must be in [1,5]");
  if (n_k < 1 || n_k % 2 == 0)
    throw TopologyError("topology: n_k must be odd and positive");
  if (n_f1 < 1) throw TopologyError("topology: n_f1 must be positive");
  required_roi(n_c, n_p, n_k);  // throws on bad block structure
}

std::vector<int> TopologySpec::strides() const {
  std::vector<int> out;
  const int per_block = convs_per_block();
  for (int b = 0; b <= n_p; ++b) {
    for (int i = 0; i < per_block; ++i) out.push_back(1);
    if (b < n_p) out.push_back(2);
  }
  return out;
}

std::string TopologySpec::name() const {
  std::string s = "net-" + std::to_string(n_l) + "-" + std::to_string(n_c) +
                  "-" + std::to_string(n_p);
  if (bypass) s += "-bp";
  return s;
}

TopologySpec TopologySpec::parse(const std::string& name) {
  auto fail = [&name]() -> TopologyError {
    return TopologyError("topology: cannot parse '" + name +
                         "' (expected net-<n_l>-<n_c>-<n_p>[-bp])");
  };
  if (name.rfind("net-", 0) != 0) throw fail();
  std::string rest = name.substr(4);
  TopologySpec spec;
  spec.bypass = false;
  if (rest.size() > 3 && rest.substr(rest.size() - 3) == "-bp") {
    spec.bypass = true;
    rest = rest.substr(0, rest.size() - 3);
  }
  int fields[3];
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t next = rest.find('-', pos);
    const std::string tok = rest.substr(pos, next == std::string::npos
                                                 ? std::string::npos
                                                 : next - pos);
    const auto res =
        std::from_chars(tok.data(), tok.data() + tok.size(), fields[i]);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
      throw fail();
    if (i < 2) {
      if (next == std::string::npos) throw fail();
      pos = next + 1;
    } else if (next != std::string::npos) {
      throw fail();
    }
  }
  spec.n_l = fields[0];
  spec.n_c = fields[1];
  spec.n_p = fields[2];
  spec.validate();
  return spec;
}

}  // namespace nirc
