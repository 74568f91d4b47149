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

#ifndef NIRC_IMAGE_IO_HPP_
#define NIRC_IMAGE_IO_HPP_

#include <optional>
#include <string>

#include "nirc/image.hpp"

namespace nirc {

// Raised for unreadable files, unsupported layouts and out-of-range samples.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Loads an 8- or 16-bit PNG / binary PGM / binary PPM image and normalizes
// samples to [0,1]. Without sensor_bits the divisor is the container maximum
// (255 or 65535). With sensor_bits the divisor is 2^sensor_bits - 1; sensor
// data wider than its declared depth is an error, never a silent rescale.
// 16-bit samples in PGM/PPM are big-endian per the Netpbm specification.
Image load_image(const std::string& path,
                 std::optional<int> sensor_bits = std::nullopt);

// Clamps to [0,1], quantizes by round(v * (2^bits - 1)) and writes the
// container selected by the file extension (.png, .pgm, .ppm). PGM holds
// single-channel images, PPM three-channel; PNG holds both.
void save_image(const Image& img, const std::string& path, int bits = 16);

}  // namespace nirc

#endif  // NIRC_IMAGE_IO_HPP_
