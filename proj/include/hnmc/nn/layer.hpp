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

#ifndef HNMC_NN_LAYER_HPP_
#define HNMC_NN_LAYER_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "hnmc/nn/kernel.hpp"

namespace hnmc::nn {

// A map from a [T, D] sequence to [T, output_dim()] per-position features.
class SequenceLayer {
 public:
  virtual ~SequenceLayer() = default;

  virtual Tensor forward(const Tensor& inputs) const = 0;
  // Scores fed to the final softmax when the layer is last in a model.
  virtual Tensor logits(const Tensor& inputs) const = 0;

  virtual std::size_t input_dim() const = 0;
  virtual std::size_t output_dim() const = 0;
  virtual void collect(const std::string& prefix, std::vector<NamedTensor>& out) const = 0;
};

}  // namespace hnmc::nn

#endif  // HNMC_NN_LAYER_HPP_
