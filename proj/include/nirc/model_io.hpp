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

#ifndef NIRC_MODEL_IO_HPP_
#define NIRC_MODEL_IO_HPP_

#include <string>

#include "nirc/model.hpp"

namespace nirc {

// Bad magic, version or header layout.
struct ModelFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Payload inconsistent with the spec in the header (truncation, extra data,
// or a file from a different topology than the caller expected).
struct ModelShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Binary model container:
//   bytes 0..3   magic "NIRC"
//   bytes 4..5   version (= 1), 16-bit little-endian
//   bytes 6..19  n_l, n_c, n_p, bypass, n_k, n_f1, window as 16-bit LE
//   byte  20     1 when the bypass is restricted to scale 0 (else 0)
//   bytes 21..63 reserved, zero
// followed by every layer's parameters as 32-bit little-endian floats in
// branch order (scale 0 first, convolutions in forward order, fusion layer
// last), weights then biases per layer. Conv weights are (out, in, ky, kx)
// row-major; fully-connected weights are (out, in) row-major.
void save_model(const Model<float>& m, const std::string& path);
Model<float> load_model(const std::string& path,
                        const TopologySpec* expected = nullptr);

}  // namespace nirc

#endif  // NIRC_MODEL_IO_HPP_
