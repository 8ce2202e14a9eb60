// Copyright 2026 The ccvq Authors.
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

#pragma once

#include <filesystem>
#include <string>

#include "ccvq/io.hpp"
#include "ccvq/vqvae.hpp"

namespace ccvq {

// Checkpoint layout (little-endian):
//   magic "VQCC" | version u32 | K u32 | D u32 | hidden u32 | side u32
//   | input tag u8 | output tag u8 | beta f64 | seed u64
//   | codebook K*D f64 (row-major)
//   | weights f64, in order: enc_conv1.w/.b, enc_conv2.w/.b, enc_proj.w/.b,
//                            dec_conv1.w/.b, dec_conv2.w/.b
//   | lesion mask, K bytes
// Shapes are implied by the header, so tensors are stored raw.
inline constexpr char kCheckpointMagic[5] = "VQCC";
inline constexpr std::uint32_t kCheckpointVersion = 1;

inline std::string serialize_checkpoint(const VqvaeModel& model) {
  const VqvaeConfig& cfg = model.config();
  ByteWriter w;
  w.tag(kCheckpointMagic);
  w.u32(kCheckpointVersion);
  w.u32(static_cast<std::uint32_t>(cfg.codebook_size));
  w.u32(static_cast<std::uint32_t>(cfg.embedding_dim));
  w.u32(static_cast<std::uint32_t>(cfg.hidden_channels));
  w.u32(static_cast<std::uint32_t>(cfg.image_side));
  w.u8(static_cast<std::uint8_t>(cfg.input_space));
  w.u8(static_cast<std::uint8_t>(cfg.output_space));
  w.f64(cfg.beta);
  w.u64(cfg.seed);
  const Tensor& cb = model.codebook_vectors();
  w.raw(cb.values.data(), cb.values.size() * sizeof(double));
  for (std::size_t i = 0; i < VqvaeModel::kCodebook; ++i) {
    const Tensor& t = model.parameters()[i].value;
    w.raw(t.values.data(), t.values.size() * sizeof(double));
  }
  for (auto m : model.lesion_mask()) w.u8(m);
  return w.str();
}

inline VqvaeModel deserialize_checkpoint(const std::string& bytes) {
  ByteReader r(bytes);
  r.expect_tag(kCheckpointMagic, "checkpoint");
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion)
    throw std::runtime_error("checkpoint: unsupported version " +
                             std::to_string(version));
  VqvaeConfig cfg;
  cfg.codebook_size = r.u32();
  cfg.embedding_dim = r.u32();
  cfg.hidden_channels = r.u32();
  cfg.image_side = r.u32();
  cfg.input_space = colour_space_from_tag(r.u8());
  cfg.output_space = colour_space_from_tag(r.u8());
  cfg.beta = r.f64();
  cfg.seed = r.u64();

  VqvaeModel model = VqvaeModel::build(cfg);
  Tensor& cb = model.codebook_vectors();
  r.raw(cb.values.data(), cb.values.size() * sizeof(double));
  for (std::size_t i = 0; i < VqvaeModel::kCodebook; ++i) {
    Tensor& t = model.parameters()[i].value;
    r.raw(t.values.data(), t.values.size() * sizeof(double));
  }
  std::vector<std::uint8_t> mask(cfg.codebook_size);
  for (auto& m : mask) m = r.u8();
  model.set_lesion_mask(std::move(mask));
  if (!r.exhausted())
    throw std::runtime_error("checkpoint: " + std::to_string(r.remaining()) +
                             " unexpected trailing bytes");
  return model;
}

inline void save_checkpoint(const VqvaeModel& model,
                            const std::filesystem::path& path) {
  write_file_atomic(path, serialize_checkpoint(model));
}

inline VqvaeModel load_checkpoint(const std::filesystem::path& path) {
  return deserialize_checkpoint(read_file(path));
}

}  // namespace ccvq
