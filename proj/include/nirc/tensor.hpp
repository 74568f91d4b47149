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

#ifndef NIRC_TENSOR_HPP_
#define NIRC_TENSOR_HPP_

#include <Eigen/Core>

#include <stdexcept>

#include "nirc/image.hpp"

namespace nirc {

template <typename S>
using VectorX = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <typename S>
using MatrixX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

// Planar activation tensor: channel-major, each plane row-major.
template <typename S>
struct Tensor {
  int channels = 0;
  int height = 0;
  int width = 0;
  VectorX<S> data;

  Tensor() = default;
  Tensor(int c, int h, int w)
      : channels(c), height(h), width(w),
        data(VectorX<S>::Zero(static_cast<Eigen::Index>(c) * h * w)) {}

  Eigen::Index plane_size() const {
    return static_cast<Eigen::Index>(height) * width;
  }
  S& at(int c, int y, int x) {
    return data[(static_cast<Eigen::Index>(c) * height + y) * width + x];
  }
  S at(int c, int y, int x) const {
    return data[(static_cast<Eigen::Index>(c) * height + y) * width + x];
  }
};

// Single-channel image patch -> 1 x h x w tensor.
template <typename S>
Tensor<S> tensor_from_patch(const Image& patch) {
  if (patch.channels != 1)
    throw std::invalid_argument("tensor_from_patch: expected single channel");
  Tensor<S> t(1, patch.height, patch.width);
  for (Eigen::Index i = 0; i < t.data.size(); ++i)
    t.data[i] = static_cast<S>(patch.data[static_cast<std::size_t>(i)]);
  return t;
}

}  // namespace nirc

#endif  // NIRC_TENSOR_HPP_
