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
//
// Trainable network kernels: valid 2-D convolution (cross-correlation
// convention, no kernel flip), ReLU, non-overlapping 2x2 max pooling and a
// fully-connected layer, each with exact backpropagation. Convolutions run
// as im2col + GEMM.

#ifndef NIRC_LAYERS_HPP_
#define NIRC_LAYERS_HPP_

#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nirc/rng.hpp"
#include "nirc/tensor.hpp"

namespace nirc {

enum class InitScheme {
  kFanIn,      // N(0, 2/fan_in); keeps deep ReLU stacks trainable
  kFixedStd,   // N(0, 0.01^2)
};

template <typename S>
struct ConvParams {
  int out_ch = 0, in_ch = 0, k = 0;
  MatrixX<S> weights;  // (out_ch, in_ch*k*k), row r laid out as (ic, ky, kx)
  VectorX<S> bias;     // (out_ch)
  MatrixX<S> w_vel;    // momentum buffers, shape-matched
  VectorX<S> b_vel;
};

template <typename S>
struct FcParams {
  MatrixX<S> weights;  // (out, in)
  VectorX<S> bias;
  MatrixX<S> w_vel;
  VectorX<S> b_vel;
};

template <typename S>
struct ConvGrads {
  MatrixX<S> weights;
  VectorX<S> bias;
};

template <typename S>
struct FcGrads {
  MatrixX<S> weights;
  VectorX<S> bias;
};

namespace detail {

template <typename S>
void fill_gaussian(MatrixX<S>& m, std::mt19937_64& rng, double stddev) {
  std::normal_distribution<double> dist(0.0, stddev);
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      m(r, c) = static_cast<S>(dist(rng));
}

inline double init_stddev(InitScheme scheme, int fan_in) {
  return scheme == InitScheme::kFanIn ? std::sqrt(2.0 / fan_in) : 0.01;
}

}  // namespace detail

// Weights Gaussian (zero-mean, scheme-dependent stddev), biases zero,
// momentum zero, deterministic per engine state.
template <typename S>
ConvParams<S> make_conv(int out_ch, int in_ch, int k, std::mt19937_64& rng,
                        InitScheme scheme = InitScheme::kFanIn) {
  ConvParams<S> p;
  p.out_ch = out_ch;
  p.in_ch = in_ch;
  p.k = k;
  p.weights.resize(out_ch, in_ch * k * k);
  detail::fill_gaussian(p.weights, rng, detail::init_stddev(scheme, in_ch * k * k));
  p.bias = VectorX<S>::Zero(out_ch);
  p.w_vel = MatrixX<S>::Zero(out_ch, in_ch * k * k);
  p.b_vel = VectorX<S>::Zero(out_ch);
  return p;
}

template <typename S>
FcParams<S> make_fc(int out, int in, std::mt19937_64& rng,
                    InitScheme scheme = InitScheme::kFanIn) {
  FcParams<S> p;
  p.weights.resize(out, in);
  detail::fill_gaussian(p.weights, rng, detail::init_stddev(scheme, in));
  p.bias = VectorX<S>::Zero(out);
  p.w_vel = MatrixX<S>::Zero(out, in);
  p.b_vel = VectorX<S>::Zero(out);
  return p;
}

// cols(in_ch*k*k, oh*ow); row (ic*k + ky)*k + kx, column oy*ow + ox.
template <typename S>
void im2col(const Tensor<S>& x, int k, MatrixX<S>& cols) {
  const int oh = x.height - k + 1;
  const int ow = x.width - k + 1;
  cols.resize(static_cast<Eigen::Index>(x.channels) * k * k,
              static_cast<Eigen::Index>(oh) * ow);
  for (int ic = 0; ic < x.channels; ++ic)
    for (int ky = 0; ky < k; ++ky)
      for (int kx = 0; kx < k; ++kx) {
        const Eigen::Index r = (static_cast<Eigen::Index>(ic) * k + ky) * k + kx;
        for (int oy = 0; oy < oh; ++oy) {
          const S* src = x.data.data() +
                         (static_cast<Eigen::Index>(ic) * x.height + oy + ky) *
                             x.width + kx;
          for (int ox = 0; ox < ow; ++ox)
            cols(r, static_cast<Eigen::Index>(oy) * ow + ox) = src[ox];
        }
      }
}

template <typename S>
void col2im_add(const MatrixX<S>& cols, int k, Tensor<S>& x) {
  const int oh = x.height - k + 1;
  const int ow = x.width - k + 1;
  for (int ic = 0; ic < x.channels; ++ic)
    for (int ky = 0; ky < k; ++ky)
      for (int kx = 0; kx < k; ++kx) {
        const Eigen::Index r = (static_cast<Eigen::Index>(ic) * k + ky) * k + kx;
        for (int oy = 0; oy < oh; ++oy) {
          S* dst = x.data.data() +
                   (static_cast<Eigen::Index>(ic) * x.height + oy + ky) *
                       x.width + kx;
          for (int ox = 0; ox < ow; ++ox)
            dst[ox] += cols(r, static_cast<Eigen::Index>(oy) * ow + ox);
        }
      }
}

// Valid convolution; output spatial side = input side - k + 1.
template <typename S>
Tensor<S> conv_forward(const Tensor<S>& x, const ConvParams<S>& p) {
  if (x.channels != p.in_ch)
    throw std::invalid_argument("conv_forward: channel mismatch");
  if (x.height < p.k || x.width < p.k)
    throw std::invalid_argument("conv_forward: input smaller than kernel");
  const int oh = x.height - p.k + 1;
  const int ow = x.width - p.k + 1;
  const Eigen::Index npix = static_cast<Eigen::Index>(oh) * ow;

  MatrixX<S> cols;
  im2col(x, p.k, cols);
  Tensor<S> y(p.out_ch, oh, ow);
  // Planar layout viewed as (npix, out_ch) column-major.
  Eigen::Map<MatrixX<S>> y_map(y.data.data(), npix, p.out_ch);
  y_map.noalias() = cols.transpose() * p.weights.transpose();
  y_map.rowwise() += p.bias.transpose();
  return y;
}

// Accumulates parameter gradients into *grads; writes the input gradient to
// *gx when non-null.
template <typename S>
void conv_backward(const Tensor<S>& x, const ConvParams<S>& p,
                   const Tensor<S>& gy, ConvGrads<S>& grads,
                   Tensor<S>* gx = nullptr) {
  const Eigen::Index npix = gy.plane_size();
  Eigen::Map<const MatrixX<S>> gy_map(gy.data.data(), npix, p.out_ch);

  MatrixX<S> cols;
  im2col(x, p.k, cols);
  grads.bias += gy_map.colwise().sum().transpose();
  grads.weights.noalias() += gy_map.transpose() * cols.transpose();
  if (gx) {
    MatrixX<S> gcols(cols.rows(), cols.cols());
    gcols.noalias() = p.weights.transpose() * gy_map.transpose();
    *gx = Tensor<S>(x.channels, x.height, x.width);
    col2im_add(gcols, p.k, *gx);
  }
}

template <typename S>
Tensor<S> relu(const Tensor<S>& x) {
  Tensor<S> y = x;
  y.data = y.data.cwiseMax(S(0));
  return y;
}

// Gradient passes only where the forward input was strictly positive.
template <typename S>
Tensor<S> relu_backward(const Tensor<S>& x_pre, const Tensor<S>& gy) {
  Tensor<S> gx = gy;
  for (Eigen::Index i = 0; i < gx.data.size(); ++i)
    if (!(x_pre.data[i] > S(0))) gx.data[i] = S(0);
  return gx;
}

namespace detail {

// Non-overlapping 2x2 max pool, stride 2. Ties pick the first maximum in
// row-major scan order. When truncate, a trailing odd row/column is dropped
// (dense inference only); otherwise odd extents are an error.
template <typename S>
Tensor<S> maxpool2_impl(const Tensor<S>& x, std::vector<int64_t>* argmax,
                        bool truncate) {
  if (!truncate && (x.height % 2 != 0 || x.width % 2 != 0))
    throw std::invalid_argument("maxpool2: spatial dimensions must be even");
  const int oh = x.height / 2;
  const int ow = x.width / 2;
  if (oh == 0 || ow == 0)
    throw std::invalid_argument("maxpool2: input too small");
  Tensor<S> y(x.channels, oh, ow);
  if (argmax) argmax->resize(static_cast<std::size_t>(x.channels) * oh * ow);
  Eigen::Index o = 0;
  for (int c = 0; c < x.channels; ++c)
    for (int oy = 0; oy < oh; ++oy)
      for (int ox = 0; ox < ow; ++ox, ++o) {
        const int iy = 2 * oy, ix = 2 * ox;
        int64_t best_idx =
            (static_cast<int64_t>(c) * x.height + iy) * x.width + ix;
        S best = x.data[best_idx];
        const int64_t candidates[3] = {best_idx + 1, best_idx + x.width,
                                       best_idx + x.width + 1};
        for (int64_t idx : candidates)
          if (x.data[idx] > best) {
            best = x.data[idx];
            best_idx = idx;
          }
        y.data[o] = best;
        if (argmax) (*argmax)[static_cast<std::size_t>(o)] = best_idx;
      }
  return y;
}

}  // namespace detail

template <typename S>
Tensor<S> maxpool2(const Tensor<S>& x, std::vector<int64_t>* argmax = nullptr) {
  return detail::maxpool2_impl(x, argmax, false);
}

// Truncating variant for dense full-image passes, where trailing fragments
// belong to patches beyond the requested output range.
template <typename S>
Tensor<S> maxpool2_trunc(const Tensor<S>& x,
                         std::vector<int64_t>* argmax = nullptr) {
  return detail::maxpool2_impl(x, argmax, true);
}

template <typename S>
Tensor<S> maxpool2_backward(const std::vector<int64_t>& argmax,
                            const Tensor<S>& gy, int in_h, int in_w) {
  Tensor<S> gx(gy.channels, in_h, in_w);
  for (Eigen::Index o = 0; o < gy.data.size(); ++o)
    gx.data[argmax[static_cast<std::size_t>(o)]] += gy.data[o];
  return gx;
}

// Affine map Wx + b. The fusion/output layer keeps a linear activation.
template <typename S>
VectorX<S> fc_forward(const VectorX<S>& x, const FcParams<S>& p) {
  if (x.size() != p.weights.cols())
    throw std::invalid_argument("fc_forward: dimension mismatch");
  return p.weights * x + p.bias;
}

template <typename S>
VectorX<S> fc_backward(const VectorX<S>& x, const FcParams<S>& p,
                       const VectorX<S>& gy, FcGrads<S>& grads) {
  grads.weights.noalias() += gy * x.transpose();
  grads.bias += gy;
  return p.weights.transpose() * gy;
}

// (1/D) * sum_i ||pred_i - target_i||^2 over the batch columns, with
// gradient 2 (pred - target) / D.
template <typename S>
std::pair<S, MatrixX<S>> mse_loss(const MatrixX<S>& pred,
                                  const MatrixX<S>& target) {
  if (pred.rows() != target.rows() || pred.cols() != target.cols())
    throw std::invalid_argument("mse_loss: shape mismatch");
  const S d = static_cast<S>(pred.cols());
  const MatrixX<S> diff = pred - target;
  const S loss = diff.squaredNorm() / d;
  return {loss, MatrixX<S>(diff * (S(2) / d))};
}

// Classic momentum: v <- momentum*v - lr*g; theta <- theta + v.
template <typename S>
void sgd_step(ConvParams<S>& p, const ConvGrads<S>& g, S lr, S momentum) {
  p.w_vel = momentum * p.w_vel - lr * g.weights;
  p.b_vel = momentum * p.b_vel - lr * g.bias;
  p.weights += p.w_vel;
  p.bias += p.b_vel;
}

template <typename S>
void sgd_step(FcParams<S>& p, const FcGrads<S>& g, S lr, S momentum) {
  p.w_vel = momentum * p.w_vel - lr * g.weights;
  p.b_vel = momentum * p.b_vel - lr * g.bias;
  p.weights += p.w_vel;
  p.bias += p.b_vel;
}

}  // namespace nirc

#endif  // NIRC_LAYERS_HPP_
