// Copyright 2026 The hnmc Authors.
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

#include "hnmc/nn/rnn_layers.hpp"

#include <string>

#include "hnmc/autodiff/ops.hpp"
#include "hnmc/errors.hpp"

namespace hnmc::nn {

RnnLayer::RnnLayer(std::size_t input_dim, std::size_t hidden, std::mt19937_64& rng, bool reverse)
    : reverse_(reverse) {
  if (input_dim == 0 || hidden == 0) throw ParameterError("RNN dimensions must be positive");
  w_in_ = init_uniform({input_dim, hidden}, input_dim + hidden, rng);
  w_h_ = init_uniform({hidden, hidden}, input_dim + hidden, rng);
  bias_ = init_uniform({hidden}, input_dim + hidden, rng);
}

Tensor RnnLayer::forward(const Tensor& inputs) const {
  if (inputs.rank() != 2 || inputs.dim(0) == 0 || inputs.dim(1) != input_dim()) {
    throw ShapeError("expected a [T, " + std::to_string(input_dim()) + "] input, got " +
                     ad::shape_to_string(inputs.shape()));
  }
  const std::size_t T = inputs.dim(0);
  std::vector<Tensor> rows(T);
  Tensor h;
  for (std::size_t s = 0; s < T; ++s) {
    const std::size_t t = reverse_ ? T - 1 - s : s;
    Tensor pre = ad::matmul(ad::row(inputs, t), w_in_) + bias_;
    if (s > 0) pre = pre + ad::matmul(h, w_h_);
    h = ad::tanh(pre);
    rows[t] = h;
  }
  return ad::stack(rows);
}

void RnnLayer::collect(const std::string& prefix, std::vector<NamedTensor>& out) const {
  out.push_back({prefix + ".w_in", w_in_});
  out.push_back({prefix + ".w_h", w_h_});
  out.push_back({prefix + ".b", bias_});
}

BiRnnLayer::BiRnnLayer(std::size_t input_dim, std::size_t hidden, std::mt19937_64& rng)
    : left_(input_dim, hidden, rng, false), right_(input_dim, hidden, rng, true) {}

Tensor BiRnnLayer::forward(const Tensor& inputs) const {
  return ad::concat_columns(left_.forward(inputs), right_.forward(inputs));
}

Tensor BiRnnLayer::logits(const Tensor& inputs) const {
  return left_.forward(inputs) + right_.forward(inputs);
}

void BiRnnLayer::collect(const std::string& prefix, std::vector<NamedTensor>& out) const {
  left_.collect(prefix + ".ltr", out);
  right_.collect(prefix + ".rtl", out);
}

}  // namespace hnmc::nn
