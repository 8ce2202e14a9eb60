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

#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccvq {

// Dense row-major tensor, double precision throughout. Shapes are fixed at
// construction; this engine has no broadcasting beyond bias-add.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> values;

  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> s)
      : shape(std::move(s)),
        values(std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                               std::multiplies<>()),
               0.0) {}

  static Tensor zeros(std::vector<std::size_t> s) { return Tensor(std::move(s)); }
  static Tensor scalar(double v) {
    Tensor t({1});
    t.values[0] = v;
    return t;
  }

  std::size_t numel() const { return values.size(); }

  std::size_t dim(std::size_t i) const { return shape.at(i); }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }

  double& at2(std::size_t i, std::size_t j) {
    return values[i * shape[1] + j];
  }
  double at2(std::size_t i, std::size_t j) const {
    return values[i * shape[1] + j];
  }
  double& at3(std::size_t c, std::size_t y, std::size_t x) {
    return values[(c * shape[1] + y) * shape[2] + x];
  }
  double at3(std::size_t c, std::size_t y, std::size_t x) const {
    return values[(c * shape[1] + y) * shape[2] + x];
  }
  double& at4(std::size_t f, std::size_t c, std::size_t y, std::size_t x) {
    return values[((f * shape[1] + c) * shape[2] + y) * shape[3] + x];
  }
  double at4(std::size_t f, std::size_t c, std::size_t y, std::size_t x) const {
    return values[((f * shape[1] + c) * shape[2] + y) * shape[3] + x];
  }
};

inline void require_same_shape(const Tensor& a, const Tensor& b,
                               const char* what) {
  if (!a.same_shape(b))
    throw std::invalid_argument(std::string(what) + ": tensor shapes differ");
}

// Named trainable tensor with its gradient buffer.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;

  Parameter() = default;
  Parameter(std::string n, Tensor v)
      : name(std::move(n)), value(std::move(v)), grad(value.shape) {}
};

inline void zero_grads(std::vector<Parameter>& params) {
  for (auto& p : params)
    std::fill(p.grad.values.begin(), p.grad.values.end(), 0.0);
}

}  // namespace ccvq
