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

#ifndef HNMC_NN_RNN_LAYERS_HPP_
#define HNMC_NN_RNN_LAYERS_HPP_

#include <cstddef>
#include <random>

#include "hnmc/nn/layer.hpp"

namespace hnmc::nn {

// h_t = tanh(x_t W_in + h_{t-1} W_h + b), h_0 = 0. With `reverse` the
// recursion runs from T down to 1.
class RnnLayer : public SequenceLayer {
 public:
  RnnLayer(std::size_t input_dim, std::size_t hidden, std::mt19937_64& rng, bool reverse = false);

  Tensor forward(const Tensor& inputs) const override;
  Tensor logits(const Tensor& inputs) const override { return forward(inputs); }
  std::size_t input_dim() const override { return w_in_.dim(0); }
  std::size_t output_dim() const override { return w_in_.dim(1); }
  void collect(const std::string& prefix, std::vector<NamedTensor>& out) const override;

  const Tensor& w_in() const noexcept { return w_in_; }
  const Tensor& w_h() const noexcept { return w_h_; }
  const Tensor& bias() const noexcept { return bias_; }

 private:
  Tensor w_in_, w_h_, bias_;
  bool reverse_;
};

// Left-to-right and right-to-left RNNs. forward() concatenates the two
// hidden states; logits() adds them, so a last layer of width L yields L
// label scores.
class BiRnnLayer : public SequenceLayer {
 public:
  BiRnnLayer(std::size_t input_dim, std::size_t hidden, std::mt19937_64& rng);

  Tensor forward(const Tensor& inputs) const override;
  Tensor logits(const Tensor& inputs) const override;
  std::size_t input_dim() const override { return left_.input_dim(); }
  std::size_t output_dim() const override { return 2 * left_.output_dim(); }
  void collect(const std::string& prefix, std::vector<NamedTensor>& out) const override;

  const RnnLayer& left_to_right() const noexcept { return left_; }
  const RnnLayer& right_to_left() const noexcept { return right_; }

 private:
  RnnLayer left_;
  RnnLayer right_;
};

}  // namespace hnmc::nn

#endif  // HNMC_NN_RNN_LAYERS_HPP_
