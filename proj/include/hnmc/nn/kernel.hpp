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

#ifndef HNMC_NN_KERNEL_HPP_
#define HNMC_NN_KERNEL_HPP_

#include <cstddef>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "hnmc/autodiff/tensor.hpp"

namespace hnmc::nn {

using ad::Tensor;

enum class Activation { kMelu, kExp, kSigmoid, kTanh };

std::string_view to_string(Activation act);
Activation parse_activation(std::string_view name);
Tensor activate(const Tensor& x, Activation act);

struct NamedTensor {
  std::string name;
  Tensor tensor;
};

struct KernelOptions {
  std::vector<std::size_t> hidden;  // widths of hidden layers, empty = one affine map
  Activation hidden_activation = Activation::kMelu;
  Activation output_activation = Activation::kMelu;
};

// Feedforward map f(obs, onehot(c)) over a finite context set. The first
// affine map is stored as separate observation and context weights, so the
// whole table of contexts costs one matrix-vector product per call.
class Kernel {
 public:
  Kernel(std::size_t obs_dim, std::size_t n_contexts, std::size_t out_dim, KernelOptions options,
         std::mt19937_64& rng);

  // [n_contexts, out_dim]; row c is f(obs, onehot(c)).
  Tensor table(const Tensor& obs) const;

  std::size_t obs_dim() const noexcept { return obs_dim_; }
  std::size_t n_contexts() const noexcept { return n_contexts_; }
  std::size_t out_dim() const noexcept { return out_dim_; }
  std::size_t depth() const noexcept { return biases_.size(); }
  const KernelOptions& options() const noexcept { return options_; }

  // weight(0) is the observation part of the first layer, [obs_dim, width].
  const Tensor& weight(std::size_t layer) const { return weights_.at(layer); }
  const Tensor& context_weight() const noexcept { return context_weight_; }
  const Tensor& bias(std::size_t layer) const { return biases_.at(layer); }

  // Appends "<prefix>.w_obs", "<prefix>.w_ctx", "<prefix>.b0", "<prefix>.w1", ...
  void collect(const std::string& prefix, std::vector<NamedTensor>& out) const;

 private:
  std::size_t obs_dim_, n_contexts_, out_dim_;
  KernelOptions options_;
  std::vector<Tensor> weights_;
  Tensor context_weight_;
  std::vector<Tensor> biases_;
};

// Uniform in [-1/sqrt(fan_in), 1/sqrt(fan_in)], trainable.
Tensor init_uniform(ad::Shape shape, std::size_t fan_in, std::mt19937_64& rng);

}  // namespace hnmc::nn

#endif  // HNMC_NN_KERNEL_HPP_
