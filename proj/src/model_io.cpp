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

#include "nirc/model_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace nirc {

namespace {

constexpr char kMagic[4] = {'N', 'I', 'R', 'C'};
constexpr uint16_t kVersion = 1;
constexpr std::size_t kHeaderSize = 64;

static_assert(std::endian::native == std::endian::little,
              "model container assumes a little-endian host");

void put_u16(std::vector<unsigned char>& buf, std::size_t off, uint16_t v) {
  buf[off] = static_cast<unsigned char>(v & 0xff);
  buf[off + 1] = static_cast<unsigned char>(v >> 8);
}

uint16_t get_u16(const std::vector<unsigned char>& buf, std::size_t off) {
  return static_cast<uint16_t>(buf[off] | (buf[off + 1] << 8));
}

void write_floats(std::ofstream& out, const float* p, std::size_t n) {
  out.write(reinterpret_cast<const char*>(p),
            static_cast<std::streamsize>(n * sizeof(float)));
}

// Row-major views of Eigen's column-major weight matrices.
void write_matrix_rowmajor(std::ofstream& out, const MatrixX<float>& m) {
  std::vector<float> row(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row[static_cast<std::size_t>(c)] = m(r, c);
    write_floats(out, row.data(), row.size());
  }
}

void read_matrix_rowmajor(std::ifstream& in, MatrixX<float>& m) {
  std::vector<float> row(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    in.read(reinterpret_cast<char*>(row.data()),
            static_cast<std::streamsize>(row.size() * sizeof(float)));
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      m(r, c) = row[static_cast<std::size_t>(c)];
  }
}

std::size_t param_float_count(const Model<float>& m) {
  std::size_t n = 0;
  for (const auto& branch : m.branches)
    for (const auto& p : branch)
      n += static_cast<std::size_t>(p.weights.size()) +
           static_cast<std::size_t>(p.bias.size());
  return n + static_cast<std::size_t>(m.fusion.weights.size()) +
         static_cast<std::size_t>(m.fusion.bias.size());
}

}  // namespace

void save_model(const Model<float>& m, const std::string& path) {
  m.spec.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelFormatError("save_model: cannot open " + path);

  std::vector<unsigned char> header(kHeaderSize, 0);
  std::memcpy(header.data(), kMagic, 4);
  put_u16(header, 4, kVersion);
  put_u16(header, 6, static_cast<uint16_t>(m.spec.n_l));
  put_u16(header, 8, static_cast<uint16_t>(m.spec.n_c));
  put_u16(header, 10, static_cast<uint16_t>(m.spec.n_p));
  put_u16(header, 12, m.spec.bypass ? 1 : 0);
  put_u16(header, 14, static_cast<uint16_t>(m.spec.n_k));
  put_u16(header, 16, static_cast<uint16_t>(m.spec.n_f1));
  put_u16(header, 18, static_cast<uint16_t>(m.window));
  header[20] = m.level0_bypass_only ? 1 : 0;
  out.write(reinterpret_cast<const char*>(header.data()), kHeaderSize);

  for (const auto& branch : m.branches)
    for (const auto& p : branch) {
      write_matrix_rowmajor(out, p.weights);
      write_floats(out, p.bias.data(), static_cast<std::size_t>(p.bias.size()));
    }
  write_matrix_rowmajor(out, m.fusion.weights);
  write_floats(out, m.fusion.bias.data(),
               static_cast<std::size_t>(m.fusion.bias.size()));
  if (!out) throw ModelFormatError("save_model: write failed for " + path);
}

Model<float> load_model(const std::string& path, const TopologySpec* expected) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw ModelFormatError("load_model: cannot open " + path);
  const std::streamsize file_size = in.tellg();
  in.seekg(0);
  if (file_size < static_cast<std::streamsize>(kHeaderSize))
    throw ModelFormatError("load_model: truncated header in " + path);

  std::vector<unsigned char> header(kHeaderSize);
  in.read(reinterpret_cast<char*>(header.data()), kHeaderSize);
  if (std::memcmp(header.data(), kMagic, 4) != 0)
    throw ModelFormatError("load_model: bad magic in " + path);
  if (get_u16(header, 4) != kVersion)
    throw ModelFormatError("load_model: unsupported version " +
                           std::to_string(get_u16(header, 4)) + " in " + path);

  TopologySpec spec;
  spec.n_l = get_u16(header, 6);
  spec.n_c = get_u16(header, 8);
  spec.n_p = get_u16(header, 10);
  spec.bypass = get_u16(header, 12) != 0;
  spec.n_k = get_u16(header, 14);
  spec.n_f1 = get_u16(header, 16);
  const int window = get_u16(header, 18);
  const bool level0_only = header[20] != 0;
  try {
    spec.validate();
  } catch (const TopologyError& e) {
    throw ModelShapeError(std::string("load_model: ") + e.what());
  }
  if (expected && !(spec == *expected))
    throw ModelShapeError("load_model: file holds " + spec.name() +
                          " but " + expected->name() + " was requested");

  // Seed is irrelevant; every parameter is overwritten below.
  Model<float> m = build_model<float>(spec, 0, window, InitScheme::kFixedStd,
                                      level0_only);
  const std::size_t payload = param_float_count(m) * sizeof(float);
  if (static_cast<std::size_t>(file_size) != kHeaderSize + payload)
    throw ModelShapeError(
        "load_model: payload size mismatch in " + path + " (" +
        std::to_string(file_size - static_cast<std::streamsize>(kHeaderSize)) +
        " bytes, expected " + std::to_string(payload) + ")");

  for (auto& branch : m.branches)
    for (auto& p : branch) {
      read_matrix_rowmajor(in, p.weights);
      in.read(reinterpret_cast<char*>(p.bias.data()),
              static_cast<std::streamsize>(p.bias.size() * sizeof(float)));
      p.w_vel.setZero();
      p.b_vel.setZero();
    }
  read_matrix_rowmajor(in, m.fusion.weights);
  in.read(reinterpret_cast<char*>(m.fusion.bias.data()),
          static_cast<std::streamsize>(m.fusion.bias.size() * sizeof(float)));
  m.fusion.w_vel.setZero();
  m.fusion.b_vel.setZero();
  if (!in) throw ModelShapeError("load_model: truncated payload in " + path);
  return m;
}

}  // namespace nirc
