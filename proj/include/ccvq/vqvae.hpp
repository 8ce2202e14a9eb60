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

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <vector>

#include "ccvq/adam.hpp"
#include "ccvq/autodiff.hpp"
#include "ccvq/colour.hpp"
#include "ccvq/delta_e.hpp"
#include "ccvq/rng.hpp"
#include "ccvq/tensor.hpp"

namespace ccvq {

struct VqvaeConfig {
  std::size_t codebook_size = 8;  // K
  std::size_t embedding_dim = 8;  // D
  ColourSpace input_space = ColourSpace::Srgb;
  ColourSpace output_space = ColourSpace::Lab;
  std::size_t hidden_channels = 16;
  std::size_t image_side = 32;
  std::size_t epochs = 30;
  double learning_rate = 2e-4;
  double beta = 0.5;  // commitment weight
  std::uint64_t seed = 1;

  // Two stride-2 encoder blocks fix the total downsampling.
  static constexpr std::size_t kDownsample = 4;

  std::size_t latent_side() const { return image_side / kDownsample; }

  void validate() const {
    if (codebook_size < 2) throw std::invalid_argument("config: K must be >= 2");
    if (embedding_dim < 1) throw std::invalid_argument("config: D must be >= 1");
    if (beta <= 0.0) throw std::invalid_argument("config: beta must be > 0");
    if (hidden_channels < 1)
      throw std::invalid_argument("config: hidden_channels must be >= 1");
    if (image_side < kDownsample || image_side % kDownsample != 0)
      throw std::invalid_argument("config: image_side must be a multiple of 4");
    if (learning_rate < 0.0)
      throw std::invalid_argument("config: learning_rate must be >= 0");
    if (epochs < 1) throw std::invalid_argument("config: epochs must be >= 1");
  }
};

// The embedding space: K vectors of dimensionality D plus a lesion mask.
// A lesioned vector is excluded from nearest-vector search and reads as an
// exact zero row wherever it is looked up directly.
struct Codebook {
  Tensor vectors;                         // [K,D]
  std::vector<std::uint8_t> lesion_mask;  // 1 = silenced

  Codebook() = default;
  Codebook(std::size_t k, std::size_t d) : vectors({k, d}), lesion_mask(k, 0) {}

  std::size_t size() const { return vectors.shape[0]; }
  std::size_t dim() const { return vectors.shape[1]; }

  std::vector<double> effective_row(std::size_t k) const {
    if (k >= size()) throw std::out_of_range("codebook: vector index out of range");
    std::vector<double> row(dim(), 0.0);
    if (!lesion_mask[k]) {
      for (std::size_t d = 0; d < dim(); ++d) row[d] = vectors.at2(k, d);
    }
    return row;
  }
};

struct LatentField {
  std::size_t height = 0, width = 0, dim = 0;
  Tensor z_e;                          // [H*W, D]
  Tensor z_q;                          // [H*W, D], rows copied from the codebook
  std::vector<std::uint32_t> indices;  // H*W entries in [0,K)
};

struct LossBreakdown {
  double reconstruction = 0.0;
  double codebook_term = 0.0;
  double commitment_term = 0.0;
  double total = 0.0;
  double beta = 0.0;
};

// Nearest-vector assignment by squared Euclidean distance over the
// non-lesioned rows; ties break to the lowest index.
inline std::vector<std::uint32_t> quantize_indices(const Tensor& z_e_nd,
                                                   const Codebook& cb) {
  if (z_e_nd.shape.size() != 2 || z_e_nd.shape[1] != cb.dim())
    throw std::invalid_argument("quantize: latent dimensionality disagrees");
  bool any_alive = false;
  for (auto m : cb.lesion_mask) any_alive |= (m == 0);
  if (!any_alive) throw std::runtime_error("quantize: all codebook vectors lesioned");

  const std::size_t n = z_e_nd.shape[0], k = cb.size(), d = cb.dim();
  std::vector<std::uint32_t> indices(n);
  for (std::size_t p = 0; p < n; ++p) {
    double best = 0.0;
    std::uint32_t best_k = 0;
    bool found = false;
    for (std::size_t c = 0; c < k; ++c) {
      if (cb.lesion_mask[c]) continue;
      double dist = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double diff = z_e_nd.at2(p, j) - cb.vectors.at2(c, j);
        dist += diff * diff;
      }
      if (!found || dist < best) {
        best = dist;
        best_k = static_cast<std::uint32_t>(c);
        found = true;
      }
    }
    indices[p] = best_k;
  }
  return indices;
}

// Assembles a LatentField from encoder output values and a codebook.
inline LatentField quantize(const Tensor& z_e_nd, const Codebook& cb,
                            std::size_t height, std::size_t width) {
  if (z_e_nd.shape[0] != height * width)
    throw std::invalid_argument("quantize: position count disagrees");
  LatentField f;
  f.height = height;
  f.width = width;
  f.dim = cb.dim();
  f.z_e = z_e_nd;
  f.indices = quantize_indices(z_e_nd, cb);
  f.z_q = Tensor({height * width, cb.dim()});
  for (std::size_t p = 0; p < f.indices.size(); ++p) {
    const auto row = cb.effective_row(f.indices[p]);
    for (std::size_t j = 0; j < cb.dim(); ++j) f.z_q.at2(p, j) = row[j];
  }
  return f;
}

// Loss values for the three-term quantised-autoencoder objective:
// reconstruction (MSE in the normalised output space), the codebook pull
// term and the commitment term, each averaged over latent positions.
// Gradient routing through the stop-gradients lives on the training tape;
// this is the value-level accounting used for logs and reports.
inline LossBreakdown vq_loss(const ImageBuffer& x_target, const ImageBuffer& x_out,
                             const LatentField& latent, double beta) {
  if (x_target.height != x_out.height || x_target.width != x_out.width)
    throw std::invalid_argument("vq_loss: image dimensions differ");
  if (x_target.space != x_out.space)
    throw std::invalid_argument("vq_loss: images must share the output space");
  const ImageBuffer tn = normalize_for_network(x_target);
  const ImageBuffer on = normalize_for_network(x_out);
  LossBreakdown l;
  l.beta = beta;
  double s = 0.0;
  for (std::size_t i = 0; i < tn.data.size(); ++i) {
    const double d = on.data[i] - tn.data[i];
    s += d * d;
  }
  l.reconstruction = s / static_cast<double>(tn.data.size());
  double q = 0.0;
  for (std::size_t i = 0; i < latent.z_e.numel(); ++i) {
    const double d = latent.z_e.values[i] - latent.z_q.values[i];
    q += d * d;
  }
  const double positions = static_cast<double>(latent.z_e.shape[0]);
  l.codebook_term = q / positions;
  l.commitment_term = q / positions;
  l.total = l.reconstruction + l.codebook_term + beta * l.commitment_term;
  return l;
}

// ---------------------------------------------------------------------------

class VqvaeModel {
 public:
  // Positional layout of parameters(); the checkpoint writer relies on it.
  enum ParamIndex {
    kEncConv1W, kEncConv1B, kEncConv2W, kEncConv2B, kEncProjW, kEncProjB,
    kDecConv1W, kDecConv1B, kDecConv2W, kDecConv2B, kCodebook, kParamCount
  };

  static VqvaeModel build(const VqvaeConfig& cfg) {
    cfg.validate();
    VqvaeModel m;
    m.cfg_ = cfg;
    Rng rng(combine_seed(cfg.seed, 0x696e6974ull));  // parameter stream
    const std::size_t hc = cfg.hidden_channels, d = cfg.embedding_dim;
    m.params_.resize(kParamCount);
    m.params_[kEncConv1W] = init_conv(rng, "enc_conv1.w", hc, 3, 3);
    m.params_[kEncConv1B] = Parameter("enc_conv1.b", Tensor({hc}));
    m.params_[kEncConv2W] = init_conv(rng, "enc_conv2.w", hc, hc, 3);
    m.params_[kEncConv2B] = Parameter("enc_conv2.b", Tensor({hc}));
    m.params_[kEncProjW] = init_conv(rng, "enc_proj.w", d, hc, 1);
    m.params_[kEncProjB] = Parameter("enc_proj.b", Tensor({d}));
    m.params_[kDecConv1W] = init_conv(rng, "dec_conv1.w", hc, d, 3);
    m.params_[kDecConv1B] = Parameter("dec_conv1.b", Tensor({hc}));
    m.params_[kDecConv2W] = init_conv(rng, "dec_conv2.w", 3, hc, 3);
    m.params_[kDecConv2B] = Parameter("dec_conv2.b", Tensor({3}));

    Tensor cb({cfg.codebook_size, d});
    const double span = 1.0 / static_cast<double>(cfg.codebook_size);
    for (double& v : cb.values) v = rng.uniform(-span, span);
    m.params_[kCodebook] = Parameter("codebook", std::move(cb));
    m.lesion_mask_.assign(cfg.codebook_size, 0);
    return m;
  }

  const VqvaeConfig& config() const { return cfg_; }
  const std::vector<Parameter>& parameters() const { return params_; }
  std::vector<Parameter>& parameters() { return params_; }

  const Tensor& codebook_vectors() const { return params_[kCodebook].value; }
  Tensor& codebook_vectors() { return params_[kCodebook].value; }
  const std::vector<std::uint8_t>& lesion_mask() const { return lesion_mask_; }
  void set_lesion_mask(std::vector<std::uint8_t> mask) {
    if (mask.size() != cfg_.codebook_size)
      throw std::invalid_argument("lesion mask size disagrees with K");
    lesion_mask_ = std::move(mask);
  }

  Codebook codebook_view() const {
    Codebook cb;
    cb.vectors = params_[kCodebook].value;
    cb.lesion_mask = lesion_mask_;
    return cb;
  }

  // One tape-backed pass. The bundle keeps the tape alive so callers can
  // attach losses and run backward.
  struct Forward {
    std::unique_ptr<Tape> tape;
    std::vector<Tape::ValueId> param_ids;  // ParamIndex order, incl. codebook
    Tape::ValueId ze_nd = 0;        // [N,D]
    Tape::ValueId zq_nd = 0;        // [N,D]
    Tape::ValueId decoder_out = 0;  // [3,S,S], normalised output space
    LatentField latent;
    ImageBuffer output;  // denormalised, tagged with the output space
  };

  // `lesion_override` replaces the stored mask for this pass only;
  // `fixed_indices` bypasses nearest-vector search (the gradient checks
  // differentiate at frozen code assignments).
  Forward forward(const ImageBuffer& x,
                  const std::vector<std::uint8_t>* lesion_override = nullptr,
                  const std::vector<std::uint32_t>* fixed_indices = nullptr) const {
    if (x.space != cfg_.input_space)
      throw std::invalid_argument("forward: image tag disagrees with input space");
    if (x.height != cfg_.image_side || x.width != cfg_.image_side)
      throw std::invalid_argument("forward: image dimensions disagree with config");

    const std::vector<std::uint8_t>& mask =
        lesion_override ? *lesion_override : lesion_mask_;
    if (mask.size() != cfg_.codebook_size)
      throw std::invalid_argument("forward: lesion mask size disagrees");

    Forward f;
    f.tape = std::make_unique<Tape>();
    Tape& t = *f.tape;
    for (const auto& p : params_) f.param_ids.push_back(t.variable(p.value));

    const ImageBuffer xn = normalize_for_network(x);
    Tensor in({3, cfg_.image_side, cfg_.image_side});
    const std::size_t n_px = xn.pixel_count();
    for (std::size_t p = 0; p < n_px; ++p) {
      const auto px = xn.pixel(p);
      in.values[0 * n_px + p] = px.c0;
      in.values[1 * n_px + p] = px.c1;
      in.values[2 * n_px + p] = px.c2;
    }
    auto input = t.constant(std::move(in));

    // encoder: two stride-2 blocks, then a 1x1 projection to D channels
    auto h1 = t.relu(t.conv2d(input, f.param_ids[kEncConv1W],
                              f.param_ids[kEncConv1B], 2, 1));
    auto h2 = t.relu(t.conv2d(h1, f.param_ids[kEncConv2W],
                              f.param_ids[kEncConv2B], 2, 1));
    auto ze_chw = t.conv2d(h2, f.param_ids[kEncProjW], f.param_ids[kEncProjB], 1, 0);
    f.ze_nd = t.channels_to_rows(ze_chw);

    Codebook masked = codebook_view();
    masked.lesion_mask = mask;
    const std::size_t ls = cfg_.latent_side();
    if (fixed_indices) {
      if (fixed_indices->size() != ls * ls)
        throw std::invalid_argument("forward: fixed index count disagrees");
      f.latent.indices = *fixed_indices;
    } else {
      f.latent.indices = quantize_indices(t.value(f.ze_nd), masked);
    }
    f.zq_nd = t.gather_rows(f.param_ids[kCodebook], f.latent.indices,
                            std::vector<std::uint8_t>(mask));

    f.latent.height = ls;
    f.latent.width = ls;
    f.latent.dim = cfg_.embedding_dim;
    f.latent.z_e = t.value(f.ze_nd);
    f.latent.z_q = t.value(f.zq_nd);

    // straight-through: decoder consumes z_e + sg[z_q - z_e], so its
    // gradient reaches the encoder while the codebook sees none of it
    auto dec_in_nd = t.add(f.ze_nd, t.stop_gradient(t.sub(f.zq_nd, f.ze_nd)));
    auto dec_in = t.rows_to_channels(dec_in_nd, ls, ls);

    auto d1 = t.relu(t.conv2d(t.upsample_nearest(dec_in, 2),
                              f.param_ids[kDecConv1W], f.param_ids[kDecConv1B],
                              1, 1));
    f.decoder_out = t.conv2d(t.upsample_nearest(d1, 2), f.param_ids[kDecConv2W],
                             f.param_ids[kDecConv2B], 1, 1);

    const Tensor& out = t.value(f.decoder_out);
    ImageBuffer norm_out(cfg_.image_side, cfg_.image_side, cfg_.output_space);
    for (std::size_t p = 0; p < n_px; ++p) {
      norm_out.set_pixel(p, {out.values[0 * n_px + p], out.values[1 * n_px + p],
                             out.values[2 * n_px + p], cfg_.output_space});
    }
    f.output = denormalize_from_network(norm_out);
    return f;
  }

  // Decodes a latent field directly (all positions already assigned), used
  // by the single-vector reconstruction probe.
  ImageBuffer decode_latent(const Tensor& z_nd) const {
    if (z_nd.shape.size() != 2 ||
        z_nd.shape[0] != cfg_.latent_side() * cfg_.latent_side() ||
        z_nd.shape[1] != cfg_.embedding_dim)
      throw std::invalid_argument("decode_latent: latent shape disagrees");
    Tape t;
    std::vector<Tape::ValueId> ids;
    for (const auto& p : params_) ids.push_back(t.constant(p.value));
    const std::size_t ls = cfg_.latent_side();
    auto dec_in = t.rows_to_channels(t.constant(z_nd), ls, ls);
    auto d1 = t.relu(t.conv2d(t.upsample_nearest(dec_in, 2), ids[kDecConv1W],
                              ids[kDecConv1B], 1, 1));
    auto out_id = t.conv2d(t.upsample_nearest(d1, 2), ids[kDecConv2W],
                           ids[kDecConv2B], 1, 1);
    const Tensor& out = t.value(out_id);
    ImageBuffer norm_out(cfg_.image_side, cfg_.image_side, cfg_.output_space);
    const std::size_t n_px = norm_out.pixel_count();
    for (std::size_t p = 0; p < n_px; ++p) {
      norm_out.set_pixel(p, {out.values[0 * n_px + p], out.values[1 * n_px + p],
                             out.values[2 * n_px + p], cfg_.output_space});
    }
    return denormalize_from_network(norm_out);
  }

  // Loss nodes attached to a forward pass; the target is the colour-
  // converted ground truth after gamut normalisation, shaped [3,S,S].
  struct LossNodes {
    Tape::ValueId reconstruction, codebook_term, commitment_term, total;
  };

  LossNodes attach_loss(Forward& f, Tensor target_normalized) const {
    Tape& t = *f.tape;
    auto target = t.constant(std::move(target_normalized));
    LossNodes l;
    l.reconstruction = t.mse(f.decoder_out, target);
    l.codebook_term = t.mean_row_sqdist(t.stop_gradient(f.ze_nd), f.zq_nd);
    l.commitment_term = t.mean_row_sqdist(f.ze_nd, t.stop_gradient(f.zq_nd));
    l.total = t.add(l.reconstruction,
                    t.add(l.codebook_term, t.scale(l.commitment_term, cfg_.beta)));
    return l;
  }

  LossBreakdown loss_values(const Forward& f, const LossNodes& l) const {
    LossBreakdown b;
    b.reconstruction = f.tape->value(l.reconstruction).values[0];
    b.codebook_term = f.tape->value(l.codebook_term).values[0];
    b.commitment_term = f.tape->value(l.commitment_term).values[0];
    b.total = f.tape->value(l.total).values[0];
    b.beta = cfg_.beta;
    return b;
  }

  // Pulls tape gradients back into the persistent parameter buffers.
  void collect_gradients(const Forward& f) {
    for (std::size_t i = 0; i < params_.size(); ++i)
      params_[i].grad = f.tape->grad(f.param_ids[i]);
  }

  Tensor target_tensor(const ImageBuffer& target_in_output_space) const {
    if (target_in_output_space.space != cfg_.output_space)
      throw std::invalid_argument("target image not in the output space");
    if (target_in_output_space.height != cfg_.image_side ||
        target_in_output_space.width != cfg_.image_side)
      throw std::invalid_argument("target image dimensions disagree");
    const ImageBuffer tn = normalize_for_network(target_in_output_space);
    Tensor out({3, cfg_.image_side, cfg_.image_side});
    const std::size_t n_px = tn.pixel_count();
    for (std::size_t p = 0; p < n_px; ++p) {
      const auto px = tn.pixel(p);
      out.values[0 * n_px + p] = px.c0;
      out.values[1 * n_px + p] = px.c1;
      out.values[2 * n_px + p] = px.c2;
    }
    return out;
  }

 private:
  VqvaeConfig cfg_;
  std::vector<Parameter> params_;
  std::vector<std::uint8_t> lesion_mask_;

  static Parameter init_conv(Rng& rng, const char* name, std::size_t out_ch,
                             std::size_t in_ch, std::size_t k) {
    Tensor w({out_ch, in_ch, k, k});
    const double limit = std::sqrt(1.0 / static_cast<double>(in_ch * k * k));
    for (double& v : w.values) v = rng.uniform(-limit, limit);
    return Parameter(name, std::move(w));
  }
};

// ---------------------------------------------------------------------------
// Training

struct TrainingEpoch {
  std::size_t epoch = 0;  // 1-based
  double reconstruction = 0.0;
  double codebook_term = 0.0;
  double commitment_term = 0.0;
  double total = 0.0;
  double mean_delta_e = 0.0;
};

using TrainingLog = std::vector<TrainingEpoch>;

inline ImageBuffer clamp_to_unit(ImageBuffer img) {
  for (double& v : img.data) v = std::clamp(v, 0.0, 1.0);
  return img;
}

// Reconstruction error in the sRGB reference frame: the output-space
// reconstruction is converted back to sRGB, clamped to the displayable
// cube, and compared against the original with CIEDE2000.
inline double reconstruction_delta_e(const ImageBuffer& original_srgb,
                                     const ImageBuffer& reconstruction) {
  if (original_srgb.space != ColourSpace::Srgb)
    throw std::invalid_argument("reconstruction_delta_e: original must be sRGB");
  const ImageBuffer back =
      clamp_to_unit(convert_image(reconstruction, ColourSpace::Srgb));
  return mean_delta_e(original_srgb, back);
}

// Single-writer training loop: batch size 1, seeded shuffling per epoch,
// targets generated on the fly by colour conversion of the input image.
inline TrainingLog train(VqvaeModel& model,
                         const std::vector<ImageBuffer>& dataset) {
  const VqvaeConfig& cfg = model.config();
  if (dataset.empty()) throw std::invalid_argument("train: dataset is empty");
  for (const auto& img : dataset) {
    if (img.height != cfg.image_side || img.width != cfg.image_side)
      throw std::invalid_argument("train: image side disagrees with config");
    if (img.space != ColourSpace::Srgb)
      throw std::invalid_argument("train: dataset images must be sRGB");
  }

  AdamState adam;
  adam.learning_rate = cfg.learning_rate;
  TrainingLog log;
  log.reserve(cfg.epochs);

  std::vector<std::size_t> order(dataset.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    Rng shuffle_rng(combine_seed(cfg.seed, 0x73687566ull + epoch));
    shuffle_rng.shuffle(order);

    TrainingEpoch row;
    row.epoch = epoch;
    for (const std::size_t idx : order) {
      const ImageBuffer& sample = dataset[idx];
      const ImageBuffer input = convert_image(sample, cfg.input_space);
      const ImageBuffer target = convert_image(sample, cfg.output_space);

      auto fwd = model.forward(input);
      auto loss = model.attach_loss(fwd, model.target_tensor(target));
      fwd.tape->backward(loss.total);
      model.collect_gradients(fwd);
      adam_step(model.parameters(), adam);

      const LossBreakdown b = model.loss_values(fwd, loss);
      row.reconstruction += b.reconstruction;
      row.codebook_term += b.codebook_term;
      row.commitment_term += b.commitment_term;
      row.total += b.total;
      row.mean_delta_e += reconstruction_delta_e(sample, fwd.output);
    }
    const double n = static_cast<double>(dataset.size());
    row.reconstruction /= n;
    row.codebook_term /= n;
    row.commitment_term /= n;
    row.total /= n;
    row.mean_delta_e /= n;
    log.push_back(row);
  }
  return log;
}

}  // namespace ccvq
