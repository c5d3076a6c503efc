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

#include "hnmc/nn/kernel.hpp"

#include <cmath>
#include <string>

#include "hnmc/autodiff/ops.hpp"
#include "hnmc/errors.hpp"

namespace hnmc::nn {

std::string_view to_string(Activation act) {
  switch (act) {
    case Activation::kMelu: return "melu";
    case Activation::kExp: return "exp";
    case Activation::kSigmoid: return "sigmoid";
    case Activation::kTanh: return "tanh";
  }
  return "unknown";
}

Activation parse_activation(std::string_view name) {
  if (name == "melu") return Activation::kMelu;
  if (name == "exp") return Activation::kExp;
  if (name == "sigmoid") return Activation::kSigmoid;
  if (name == "tanh") return Activation::kTanh;
  throw ParameterError("unknown activation '" + std::string(name) + "'");
}

Tensor activate(const Tensor& x, Activation act) {
  switch (act) {
    case Activation::kMelu: return ad::melu(x);
    case Activation::kExp: return ad::exp(x);
    case Activation::kSigmoid: return ad::sigmoid(x);
    case Activation::kTanh: return ad::tanh(x);
  }
  return x;
}

Tensor init_uniform(ad::Shape shape, std::size_t fan_in, std::mt19937_64& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in == 0 ? 1 : fan_in));
  std::uniform_real_distribution<double> u(-bound, bound);
  std::vector<double> v(ad::shape_size(shape));
  for (double& x : v) x = u(rng);
  return Tensor(std::move(shape), std::move(v), true);
}

Kernel::Kernel(std::size_t obs_dim, std::size_t n_contexts, std::size_t out_dim,
               KernelOptions options, std::mt19937_64& rng)
    : obs_dim_(obs_dim), n_contexts_(n_contexts), out_dim_(out_dim), options_(std::move(options)) {
  if (obs_dim == 0 || n_contexts == 0 || out_dim == 0) {
    throw ParameterError("kernel dimensions must be positive");
  }
  std::vector<std::size_t> widths = options_.hidden;
  widths.push_back(out_dim);
  for (std::size_t w : widths) {
    if (w == 0) throw ParameterError("kernel layer widths must be positive");
  }
  const std::size_t fan0 = obs_dim + n_contexts;
  weights_.push_back(init_uniform({obs_dim, widths[0]}, fan0, rng));
  context_weight_ = init_uniform({n_contexts, widths[0]}, fan0, rng);
  biases_.push_back(init_uniform({widths[0]}, fan0, rng));
  for (std::size_t l = 1; l < widths.size(); ++l) {
    weights_.push_back(init_uniform({widths[l - 1], widths[l]}, widths[l - 1], rng));
    biases_.push_back(init_uniform({widths[l]}, widths[l - 1], rng));
  }
}

Tensor Kernel::table(const Tensor& obs) const {
  if (obs.rank() != 1 || obs.dim(0) != obs_dim_) {
    throw ShapeError("kernel expects an observation of width " + std::to_string(obs_dim_) +
                     ", got " + ad::shape_to_string(obs.shape()));
  }
  const std::size_t last = biases_.size() - 1;
  Tensor h = context_weight_ + (ad::matmul(obs, weights_[0]) + biases_[0]);
  h = activate(h, last == 0 ? options_.output_activation : options_.hidden_activation);
  for (std::size_t l = 1; l <= last; ++l) {
    h = ad::matmul(h, weights_[l]) + biases_[l];
    h = activate(h, l == last ? options_.output_activation : options_.hidden_activation);
  }
  return h;
}

void Kernel::collect(const std::string& prefix, std::vector<NamedTensor>& out) const {
  out.push_back({prefix + ".w_obs", weights_[0]});
  out.push_back({prefix + ".w_ctx", context_weight_});
  out.push_back({prefix + ".b0", biases_[0]});
  for (std::size_t l = 1; l < biases_.size(); ++l) {
    out.push_back({prefix + ".w" + std::to_string(l), weights_[l]});
    out.push_back({prefix + ".b" + std::to_string(l), biases_[l]});
  }
}

}  // namespace hnmc::nn
