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

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ccvq/tensor.hpp"

namespace ccvq {

// Bias-corrected Adam. Moment buffers are created on the first step and
// keyed positionally, so the parameter list must keep a stable order.
struct AdamState {
  double learning_rate = 2e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t step = 0;
  std::vector<Tensor> m, v;
};

inline void adam_step(std::vector<Parameter>& params, AdamState& s) {
  if (s.m.empty()) {
    for (const auto& p : params) {
      s.m.emplace_back(p.value.shape);
      s.v.emplace_back(p.value.shape);
    }
  }
  if (s.m.size() != params.size())
    throw std::invalid_argument("adam_step: parameter count changed");
  s.step += 1;
  const double bc1 = 1.0 - std::pow(s.beta1, static_cast<double>(s.step));
  const double bc2 = 1.0 - std::pow(s.beta2, static_cast<double>(s.step));
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto& p = params[i];
    if (!p.grad.same_shape(p.value))
      throw std::invalid_argument("adam_step: gradient shape mismatch");
    for (std::size_t j = 0; j < p.value.numel(); ++j) {
      const double g = p.grad.values[j];
      double& m = s.m[i].values[j];
      double& v = s.v[i].values[j];
      m = s.beta1 * m + (1.0 - s.beta1) * g;
      v = s.beta2 * v + (1.0 - s.beta2) * g * g;
      const double m_hat = m / bc1;
      const double v_hat = v / bc2;
      p.value.values[j] -= s.learning_rate * m_hat / (std::sqrt(v_hat) + s.epsilon);
    }
  }
}

}  // namespace ccvq
