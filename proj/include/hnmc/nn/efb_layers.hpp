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

#ifndef HNMC_NN_EFB_LAYERS_HPP_
#define HNMC_NN_EFB_LAYERS_HPP_

#include <cstddef>
#include <random>
#include <vector>

#include "hnmc/nn/layer.hpp"

// Neural entropic forward-backward layers. Every position t gets an N x N
// kernel K_t(j, i) standing in for a_j(i) L_{y_t}(i) / pi(i); the layer runs
//   alpha_1 = s K_1,  alpha_t = alpha_{t-1} K_t,  beta_T = 1,
//   beta_t = K_{t+1} beta_{t+1}
// with per-step normalisation, and outputs normalize(alpha_t * beta_t). The
// vector s plays the role of a virtual state x_0.
//
// Output rows are probability vectors; logits() returns their logarithm so
// the final softmax gives back the posterior itself.
namespace hnmc::nn {

class HnmcLayer : public SequenceLayer {
 public:
  HnmcLayer(std::size_t input_dim, std::size_t n_states, const KernelOptions& options,
            std::mt19937_64& rng);

  Tensor forward(const Tensor& inputs) const override;
  Tensor logits(const Tensor& inputs) const override;
  std::size_t input_dim() const override { return net_.obs_dim(); }
  std::size_t output_dim() const override { return net_.out_dim(); }
  void collect(const std::string& prefix, std::vector<NamedTensor>& out) const override;

  // net(y_t, j)_i = K_t(j, i).
  const Kernel& net() const noexcept { return net_; }
  Kernel& net() noexcept { return net_; }
  // Weights of the virtual initial state, all ones by default.
  void set_initial_state(std::vector<double> weights);
  const std::vector<double>& initial_state() const noexcept { return initial_; }

 private:
  Kernel net_;
  std::vector<double> initial_;
};

// Order-2 version on pairs: net(y_t, (k, j))_i stands in for
// a2_{k,j}(i) L_{y_t}(i) / pi(i). The initial pair table P plays the role of
// (x_{-1}, x_0), so every position, including T = 1, uses the same rule:
// posterior_t(i) proportional to sum_j alpha2_t(j, i) beta2_t(j, i).
class Hnmc2Layer : public SequenceLayer {
 public:
  Hnmc2Layer(std::size_t input_dim, std::size_t n_states, const KernelOptions& options,
             std::mt19937_64& rng);

  Tensor forward(const Tensor& inputs) const override;
  Tensor logits(const Tensor& inputs) const override;
  std::size_t input_dim() const override { return net_.obs_dim(); }
  std::size_t output_dim() const override { return n_states_; }
  void collect(const std::string& prefix, std::vector<NamedTensor>& out) const override;

  // Context index of the pair (k, j) is k * N + j.
  const Kernel& net() const noexcept { return net_; }
  Kernel& net() noexcept { return net_; }
  // Row-major N x N table, all ones by default.
  void set_initial_pairs(std::vector<double> weights);
  const std::vector<double>& initial_pairs() const noexcept { return initial_; }

 private:
  std::size_t n_states_;
  Kernel net_;
  std::vector<double> initial_;
};

// Complexified-noise version with two nets:
//   net_I(y_t, j)_i      in place of I_{j,y_t}(i) / a_j(i)
//   net_J(y_{t+1}, j)_i  in place of L_{y_{t+1}}(i) J_{i,y_{t+1}}(j) / pi(j)
// so K_{t+1}(j, i) = net_I(y_t, j)_i * net_J(y_{t+1}, j)_i. Both nets take the
// previous state as context, which lets a plain affine net_J put the
// evidence of y_{t+1} on x_{t+1} directly. The missing y_0
// of the virtual initial state is a zero vector.
class HnmcCnLayer : public SequenceLayer {
 public:
  HnmcCnLayer(std::size_t input_dim, std::size_t n_states, const KernelOptions& options,
              std::mt19937_64& rng);
  HnmcCnLayer(std::size_t input_dim, std::size_t n_states, const KernelOptions& options_i,
              const KernelOptions& options_j, std::mt19937_64& rng);

  Tensor forward(const Tensor& inputs) const override;
  Tensor logits(const Tensor& inputs) const override;
  std::size_t input_dim() const override { return net_i_.obs_dim(); }
  std::size_t output_dim() const override { return net_i_.out_dim(); }
  void collect(const std::string& prefix, std::vector<NamedTensor>& out) const override;

  const Kernel& net_i() const noexcept { return net_i_; }
  const Kernel& net_j() const noexcept { return net_j_; }
  Kernel& net_i() noexcept { return net_i_; }
  Kernel& net_j() noexcept { return net_j_; }
  void set_initial_state(std::vector<double> weights);
  const std::vector<double>& initial_state() const noexcept { return initial_; }

 private:
  Kernel net_i_;
  Kernel net_j_;
  std::vector<double> initial_;
};

// The recursion shared by HnmcLayer and HnmcCnLayer: `kernels[t]` is K_{t+1}.
Tensor chain_posteriors(const Tensor& initial, const std::vector<Tensor>& kernels);

}  // namespace hnmc::nn

#endif  // HNMC_NN_EFB_LAYERS_HPP_
