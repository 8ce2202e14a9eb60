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
#include <functional>
#include <stdexcept>
#include <vector>

#include "ccvq/tensor.hpp"

namespace ccvq {

// Reverse-mode tape over a fixed operator set. One tape = one forward pass;
// node creation order is the topological order used for the backward sweep.
// Gradients live in per-node buffers that start as exact zeros and only ever
// receive += contributions, so a value with no path to the loss keeps a
// bit-exact zero gradient (stop_gradient relies on this).
class Tape {
 public:
  using ValueId = std::uint32_t;

  ValueId constant(Tensor t) { return push(std::move(t), false); }
  ValueId variable(Tensor t) { return push(std::move(t), true); }

  const Tensor& value(ValueId id) const { return nodes_[id].value; }
  const Tensor& grad(ValueId id) const {
    if (!nodes_[id].requires_grad)
      throw std::logic_error("gradient requested for a non-differentiable node");
    return nodes_[id].grad;
  }

  // Identity forward, zero partial derivatives backward.
  ValueId stop_gradient(ValueId x) {
    return push(nodes_[x].value, false);
  }

  ValueId add(ValueId a, ValueId b) {
    require_same_shape(val(a), val(b), "add");
    Tensor out = val(a);
    for (std::size_t i = 0; i < out.numel(); ++i) out.values[i] += val(b).values[i];
    ValueId y = push(std::move(out), needs(a) || needs(b));
    set_backward(y, [a, b, y](Tape& t) {
      t.spread(a, y, +1.0);
      t.spread(b, y, +1.0);
    });
    return y;
  }

  ValueId sub(ValueId a, ValueId b) {
    require_same_shape(val(a), val(b), "sub");
    Tensor out = val(a);
    for (std::size_t i = 0; i < out.numel(); ++i) out.values[i] -= val(b).values[i];
    ValueId y = push(std::move(out), needs(a) || needs(b));
    set_backward(y, [a, b, y](Tape& t) {
      t.spread(a, y, +1.0);
      t.spread(b, y, -1.0);
    });
    return y;
  }

  ValueId scale(ValueId a, double s) {
    Tensor out = val(a);
    for (double& v : out.values) v *= s;
    ValueId y = push(std::move(out), needs(a));
    set_backward(y, [a, y, s](Tape& t) { t.spread(a, y, s); });
    return y;
  }

  ValueId relu(ValueId x) {
    Tensor out = val(x);
    for (double& v : out.values) v = v > 0.0 ? v : 0.0;
    ValueId y = push(std::move(out), needs(x));
    set_backward(y, [x, y](Tape& t) {
      if (!t.needs(x)) return;
      const Tensor& xv = t.val(x);
      Tensor& gx = t.nodes_[x].grad;
      const Tensor& gy = t.nodes_[y].grad;
      for (std::size_t i = 0; i < xv.numel(); ++i)
        if (xv.values[i] > 0.0) gx.values[i] += gy.values[i];
    });
    return y;
  }

  // Cross-correlation in the usual NN sense, zero padding, square stride.
  // x: [C,H,W], w: [F,C,kh,kw], b: [F] -> y: [F,Ho,Wo]
  ValueId conv2d(ValueId x, ValueId w, ValueId b, std::size_t stride,
                 std::size_t pad) {
    const Tensor& xv = val(x);
    const Tensor& wv = val(w);
    const Tensor& bv = val(b);
    if (xv.shape.size() != 3 || wv.shape.size() != 4 || bv.shape.size() != 1)
      throw std::invalid_argument("conv2d: expected x[C,H,W], w[F,C,kh,kw], b[F]");
    if (xv.shape[0] != wv.shape[1])
      throw std::invalid_argument("conv2d: channel counts disagree");
    if (wv.shape[0] != bv.shape[0])
      throw std::invalid_argument("conv2d: bias size disagrees with filters");
    if (stride < 1) throw std::invalid_argument("conv2d: stride must be >= 1");
    const std::size_t C = xv.shape[0], H = xv.shape[1], W = xv.shape[2];
    const std::size_t F = wv.shape[0], kh = wv.shape[2], kw = wv.shape[3];
    if (H + 2 * pad < kh || W + 2 * pad < kw)
      throw std::invalid_argument("conv2d: kernel larger than padded input");
    const std::size_t Ho = (H + 2 * pad - kh) / stride + 1;
    const std::size_t Wo = (W + 2 * pad - kw) / stride + 1;

    Tensor out({F, Ho, Wo});
    for (std::size_t f = 0; f < F; ++f)
      for (std::size_t i = 0; i < Ho; ++i)
        for (std::size_t j = 0; j < Wo; ++j) {
          double acc = bv.values[f];
          for (std::size_t c = 0; c < C; ++c)
            for (std::size_t u = 0; u < kh; ++u) {
              const std::ptrdiff_t yy =
                  static_cast<std::ptrdiff_t>(i * stride + u) -
                  static_cast<std::ptrdiff_t>(pad);
              if (yy < 0 || yy >= static_cast<std::ptrdiff_t>(H)) continue;
              for (std::size_t v = 0; v < kw; ++v) {
                const std::ptrdiff_t xx =
                    static_cast<std::ptrdiff_t>(j * stride + v) -
                    static_cast<std::ptrdiff_t>(pad);
                if (xx < 0 || xx >= static_cast<std::ptrdiff_t>(W)) continue;
                acc += xv.at3(c, yy, xx) * wv.at4(f, c, u, v);
              }
            }
          out.at3(f, i, j) = acc;
        }

    ValueId y = push(std::move(out), needs(x) || needs(w) || needs(b));
    set_backward(y, [x, w, b, y, stride, pad](Tape& t) {
      const Tensor& xv = t.val(x);
      const Tensor& wv = t.val(w);
      const Tensor& gy = t.nodes_[y].grad;
      const std::size_t C = xv.shape[0], H = xv.shape[1], W = xv.shape[2];
      const std::size_t F = wv.shape[0], kh = wv.shape[2], kw = wv.shape[3];
      const std::size_t Ho = gy.shape[1], Wo = gy.shape[2];
      Tensor* gx = t.needs(x) ? &t.nodes_[x].grad : nullptr;
      Tensor* gw = t.needs(w) ? &t.nodes_[w].grad : nullptr;
      Tensor* gb = t.needs(b) ? &t.nodes_[b].grad : nullptr;
      for (std::size_t f = 0; f < F; ++f)
        for (std::size_t i = 0; i < Ho; ++i)
          for (std::size_t j = 0; j < Wo; ++j) {
            const double g = gy.at3(f, i, j);
            if (gb) gb->values[f] += g;
            for (std::size_t c = 0; c < C; ++c)
              for (std::size_t u = 0; u < kh; ++u) {
                const std::ptrdiff_t yy =
                    static_cast<std::ptrdiff_t>(i * stride + u) -
                    static_cast<std::ptrdiff_t>(pad);
                if (yy < 0 || yy >= static_cast<std::ptrdiff_t>(H)) continue;
                for (std::size_t v = 0; v < kw; ++v) {
                  const std::ptrdiff_t xx =
                      static_cast<std::ptrdiff_t>(j * stride + v) -
                      static_cast<std::ptrdiff_t>(pad);
                  if (xx < 0 || xx >= static_cast<std::ptrdiff_t>(W)) continue;
                  if (gw) gw->at4(f, c, u, v) += g * xv.at3(c, yy, xx);
                  if (gx) gx->at3(c, yy, xx) += g * wv.at4(f, c, u, v);
                }
              }
          }
    });
    return y;
  }

  // x: [C,H,W] -> [C, H*factor, W*factor], nearest neighbour.
  ValueId upsample_nearest(ValueId x, std::size_t factor) {
    if (factor < 1) throw std::invalid_argument("upsample: factor must be >= 1");
    const Tensor& xv = val(x);
    if (xv.shape.size() != 3)
      throw std::invalid_argument("upsample: expected [C,H,W]");
    const std::size_t C = xv.shape[0], H = xv.shape[1], W = xv.shape[2];
    Tensor out({C, H * factor, W * factor});
    for (std::size_t c = 0; c < C; ++c)
      for (std::size_t i = 0; i < H * factor; ++i)
        for (std::size_t j = 0; j < W * factor; ++j)
          out.at3(c, i, j) = xv.at3(c, i / factor, j / factor);
    ValueId y = push(std::move(out), needs(x));
    set_backward(y, [x, y, factor](Tape& t) {
      if (!t.needs(x)) return;
      Tensor& gx = t.nodes_[x].grad;
      const Tensor& gy = t.nodes_[y].grad;
      const std::size_t C = gy.shape[0], Ho = gy.shape[1], Wo = gy.shape[2];
      for (std::size_t c = 0; c < C; ++c)
        for (std::size_t i = 0; i < Ho; ++i)
          for (std::size_t j = 0; j < Wo; ++j)
            gx.at3(c, i / factor, j / factor) += gy.at3(c, i, j);
    });
    return y;
  }

  // x: [N,In] * w: [In,Out] + b: [Out] -> [N,Out]
  ValueId affine(ValueId x, ValueId w, ValueId b) {
    const Tensor& xv = val(x);
    const Tensor& wv = val(w);
    const Tensor& bv = val(b);
    if (xv.shape.size() != 2 || wv.shape.size() != 2 || bv.shape.size() != 1 ||
        xv.shape[1] != wv.shape[0] || wv.shape[1] != bv.shape[0])
      throw std::invalid_argument("affine: shape mismatch");
    const std::size_t N = xv.shape[0], In = xv.shape[1], Out = wv.shape[1];
    Tensor out({N, Out});
    for (std::size_t n = 0; n < N; ++n)
      for (std::size_t o = 0; o < Out; ++o) {
        double acc = bv.values[o];
        for (std::size_t i = 0; i < In; ++i) acc += xv.at2(n, i) * wv.at2(i, o);
        out.at2(n, o) = acc;
      }
    ValueId y = push(std::move(out), needs(x) || needs(w) || needs(b));
    set_backward(y, [x, w, b, y](Tape& t) {
      const Tensor& xv = t.val(x);
      const Tensor& wv = t.val(w);
      const Tensor& gy = t.nodes_[y].grad;
      const std::size_t N = xv.shape[0], In = xv.shape[1], Out = wv.shape[1];
      for (std::size_t n = 0; n < N; ++n)
        for (std::size_t o = 0; o < Out; ++o) {
          const double g = gy.at2(n, o);
          if (t.needs(b)) t.nodes_[b].grad.values[o] += g;
          for (std::size_t i = 0; i < In; ++i) {
            if (t.needs(w)) t.nodes_[w].grad.at2(i, o) += g * xv.at2(n, i);
            if (t.needs(x)) t.nodes_[x].grad.at2(n, i) += g * wv.at2(i, o);
          }
        }
    });
    return y;
  }

  // matrix: [K,D], indices: N entries in [0,K) -> [N,D]. Rows flagged in
  // zero_rows read as exact zeros and receive no gradient.
  ValueId gather_rows(ValueId matrix, std::vector<std::uint32_t> indices,
                      std::vector<std::uint8_t> zero_rows = {}) {
    const Tensor& mv = val(matrix);
    if (mv.shape.size() != 2)
      throw std::invalid_argument("gather_rows: expected [K,D]");
    const std::size_t K = mv.shape[0], D = mv.shape[1];
    if (!zero_rows.empty() && zero_rows.size() != K)
      throw std::invalid_argument("gather_rows: mask size must be K");
    Tensor out({indices.size(), D});
    for (std::size_t n = 0; n < indices.size(); ++n) {
      const std::uint32_t k = indices[n];
      if (k >= K) throw std::out_of_range("gather_rows: index out of range");
      if (!zero_rows.empty() && zero_rows[k]) continue;  // stays zero
      for (std::size_t d = 0; d < D; ++d) out.at2(n, d) = mv.at2(k, d);
    }
    ValueId y = push(std::move(out), needs(matrix));
    set_backward(y, [matrix, y, indices = std::move(indices),
                     zero_rows = std::move(zero_rows)](Tape& t) {
      if (!t.needs(matrix)) return;
      Tensor& gm = t.nodes_[matrix].grad;
      const Tensor& gy = t.nodes_[y].grad;
      const std::size_t D = gm.shape[1];
      for (std::size_t n = 0; n < indices.size(); ++n) {
        const std::uint32_t k = indices[n];
        if (!zero_rows.empty() && zero_rows[k]) continue;
        for (std::size_t d = 0; d < D; ++d) gm.at2(k, d) += gy.at2(n, d);
      }
    });
    return y;
  }

  // [C,H,W] -> [H*W, C]; pairs with rows_to_channels below.
  ValueId channels_to_rows(ValueId x) {
    const Tensor& xv = val(x);
    if (xv.shape.size() != 3)
      throw std::invalid_argument("channels_to_rows: expected [C,H,W]");
    const std::size_t C = xv.shape[0], N = xv.shape[1] * xv.shape[2];
    Tensor out({N, C});
    for (std::size_t c = 0; c < C; ++c)
      for (std::size_t p = 0; p < N; ++p) out.at2(p, c) = xv.values[c * N + p];
    ValueId y = push(std::move(out), needs(x));
    set_backward(y, [x, y](Tape& t) {
      if (!t.needs(x)) return;
      Tensor& gx = t.nodes_[x].grad;
      const Tensor& gy = t.nodes_[y].grad;
      const std::size_t C = gx.shape[0], N = gx.shape[1] * gx.shape[2];
      for (std::size_t c = 0; c < C; ++c)
        for (std::size_t p = 0; p < N; ++p) gx.values[c * N + p] += gy.at2(p, c);
    });
    return y;
  }

  ValueId rows_to_channels(ValueId x, std::size_t h, std::size_t w) {
    const Tensor& xv = val(x);
    if (xv.shape.size() != 2 || xv.shape[0] != h * w)
      throw std::invalid_argument("rows_to_channels: expected [h*w, C]");
    const std::size_t C = xv.shape[1], N = h * w;
    Tensor out({C, h, w});
    for (std::size_t c = 0; c < C; ++c)
      for (std::size_t p = 0; p < N; ++p) out.values[c * N + p] = xv.at2(p, c);
    ValueId y = push(std::move(out), needs(x));
    set_backward(y, [x, y](Tape& t) {
      if (!t.needs(x)) return;
      Tensor& gx = t.nodes_[x].grad;
      const Tensor& gy = t.nodes_[y].grad;
      const std::size_t C = gy.shape[0], N = gy.shape[1] * gy.shape[2];
      for (std::size_t c = 0; c < C; ++c)
        for (std::size_t p = 0; p < N; ++p) gx.at2(p, c) += gy.values[c * N + p];
    });
    return y;
  }

  // Mean over all elements of (a-b)^2 -> scalar.
  ValueId mse(ValueId a, ValueId b) { return sq_diff(a, b, val(a).numel(), "mse"); }

  // Mean over rows of the squared L2 distance between matching rows of two
  // [N,D] tensors -> scalar (the codebook/commitment term shape).
  ValueId mean_row_sqdist(ValueId a, ValueId b) {
    const Tensor& av = val(a);
    if (av.shape.size() != 2)
      throw std::invalid_argument("mean_row_sqdist: expected [N,D]");
    return sq_diff(a, b, av.shape[0], "mean_row_sqdist");
  }

  // Root must be scalar. Sweeps nodes in reverse creation order.
  void backward(ValueId root) {
    if (val(root).numel() != 1)
      throw std::invalid_argument("backward: root must be a scalar");
    if (!nodes_[root].requires_grad)
      throw std::invalid_argument("backward: root does not require gradients");
    nodes_[root].grad.values[0] = 1.0;
    for (std::size_t i = nodes_.size(); i-- > 0;) {
      if (nodes_[i].requires_grad && nodes_[i].backward_fn) nodes_[i].backward_fn(*this);
    }
  }

 private:
  struct Node {
    Tensor value;
    Tensor grad;  // allocated (zeros) iff requires_grad
    bool requires_grad = false;
    std::function<void(Tape&)> backward_fn;
  };

  std::vector<Node> nodes_;

  const Tensor& val(ValueId id) const { return nodes_[id].value; }
  bool needs(ValueId id) const { return nodes_[id].requires_grad; }

  ValueId push(Tensor t, bool requires_grad) {
    Node n;
    n.value = std::move(t);
    n.requires_grad = requires_grad;
    if (requires_grad) n.grad = Tensor(n.value.shape);
    nodes_.push_back(std::move(n));
    return static_cast<ValueId>(nodes_.size() - 1);
  }

  void set_backward(ValueId id, std::function<void(Tape&)> fn) {
    if (nodes_[id].requires_grad) nodes_[id].backward_fn = std::move(fn);
  }

  // gx += s * gy, elementwise (same shapes).
  void spread(ValueId x, ValueId y, double s) {
    if (!needs(x)) return;
    Tensor& gx = nodes_[x].grad;
    const Tensor& gy = nodes_[y].grad;
    for (std::size_t i = 0; i < gx.numel(); ++i) gx.values[i] += s * gy.values[i];
  }

  ValueId sq_diff(ValueId a, ValueId b, std::size_t denom, const char* what) {
    require_same_shape(val(a), val(b), what);
    if (denom == 0) throw std::invalid_argument("empty reduction");
    const Tensor& av = val(a);
    const Tensor& bv = val(b);
    double s = 0.0;
    for (std::size_t i = 0; i < av.numel(); ++i) {
      const double d = av.values[i] - bv.values[i];
      s += d * d;
    }
    ValueId y = push(Tensor::scalar(s / static_cast<double>(denom)),
                     needs(a) || needs(b));
    set_backward(y, [a, b, y, denom](Tape& t) {
      const Tensor& av = t.val(a);
      const Tensor& bv = t.val(b);
      const double g = 2.0 * t.nodes_[y].grad.values[0] / static_cast<double>(denom);
      for (std::size_t i = 0; i < av.numel(); ++i) {
        const double d = g * (av.values[i] - bv.values[i]);
        if (t.needs(a)) t.nodes_[a].grad.values[i] += d;
        if (t.needs(b)) t.nodes_[b].grad.values[i] -= d;
      }
    });
    return y;
  }
};

}  // namespace ccvq
