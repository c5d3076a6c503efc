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

#include "hnmc/nn/efb_layers.hpp"

#include <cmath>
#include <string>

#include "hnmc/autodiff/ops.hpp"
#include "hnmc/errors.hpp"

namespace hnmc::nn {
namespace {

void check_inputs(const Tensor& inputs, std::size_t width) {
  if (inputs.rank() != 2 || inputs.dim(0) == 0 || inputs.dim(1) != width) {
    throw ShapeError("expected a [T, " + std::to_string(width) + "] input with T >= 1, got " +
                     ad::shape_to_string(inputs.shape()));
  }
}

const Tensor& check_kernel(const Tensor& k, std::size_t t) {
  for (double v : k.values()) {
    if (!std::isfinite(v)) {
      throw NumericalError("non-finite kernel output at position " + std::to_string(t + 1));
    }
  }
  return k;
}

std::vector<double> checked_weights(std::vector<double> w, std::size_t n, const char* what) {
  if (w.size() != n) throw ShapeError(std::string(what) + " has the wrong size");
  double total = 0.0;
  for (double v : w) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ParameterError(std::string(what) + " must be >= 0");
    total += v;
  }
  if (!(total > 0.0)) throw ParameterError(std::string(what) + " must not be all zero");
  return w;
}

Tensor log_checked(const Tensor& p) {
  for (double v : p.values()) {
    if (!(v > 0.0)) throw NumericalError("posterior underflowed to zero; log-score undefined");
  }
  return ad::log(p);
}

}  // namespace

Tensor chain_posteriors(const Tensor& initial, const std::vector<Tensor>& kernels) {
  const std::size_t T = kernels.size();
  if (T == 0) throw ShapeError("empty sequence");
  const std::size_t n = initial.size();
  std::vector<Tensor> alpha(T), beta(T), rows(T);
  alpha[0] = ad::normalize(ad::matmul(initial, kernels[0]));
  for (std::size_t t = 1; t < T; ++t) alpha[t] = ad::normalize(ad::matmul(alpha[t - 1], kernels[t]));
  beta[T - 1] = Tensor::full({n}, 1.0 / static_cast<double>(n));
  for (std::size_t t = T - 1; t-- > 0;) {
    beta[t] = ad::normalize(ad::matmul(kernels[t + 1], beta[t + 1]));
  }
  for (std::size_t t = 0; t < T; ++t) rows[t] = ad::normalize(alpha[t] * beta[t]);
  return ad::stack(rows);
}

// ---- HNMC ----

HnmcLayer::HnmcLayer(std::size_t input_dim, std::size_t n_states, const KernelOptions& options,
                     std::mt19937_64& rng)
    : net_(input_dim, n_states, n_states, options, rng), initial_(n_states, 1.0) {}

void HnmcLayer::set_initial_state(std::vector<double> weights) {
  initial_ = checked_weights(std::move(weights), net_.out_dim(), "initial state");
}

Tensor HnmcLayer::forward(const Tensor& inputs) const {
  check_inputs(inputs, input_dim());
  std::vector<Tensor> kernels(inputs.dim(0));
  for (std::size_t t = 0; t < kernels.size(); ++t) {
    kernels[t] = check_kernel(net_.table(ad::row(inputs, t)), t);
  }
  return chain_posteriors(Tensor::vector(initial_), kernels);
}

Tensor HnmcLayer::logits(const Tensor& inputs) const { return log_checked(forward(inputs)); }

void HnmcLayer::collect(const std::string& prefix, std::vector<NamedTensor>& out) const {
  net_.collect(prefix + ".net", out);
}

// ---- HNMC2 ----

Hnmc2Layer::Hnmc2Layer(std::size_t input_dim, std::size_t n_states, const KernelOptions& options,
                       std::mt19937_64& rng)
    : n_states_(n_states),
      net_(input_dim, n_states * n_states, n_states, options, rng),
      initial_(n_states * n_states, 1.0) {}

void Hnmc2Layer::set_initial_pairs(std::vector<double> weights) {
  initial_ = checked_weights(std::move(weights), n_states_ * n_states_, "initial pair table");
}

Tensor Hnmc2Layer::forward(const Tensor& inputs) const {
  check_inputs(inputs, input_dim());
  const std::size_t T = inputs.dim(0), n = n_states_;
  std::vector<Tensor> kernels(T);
  for (std::size_t t = 0; t < T; ++t) kernels[t] = check_kernel(net_.table(ad::row(inputs, t)), t);

  // Pair tables are flattened row-major: index j * N + i for (x_{t-1}, x_t).
  // alpha2_{t}(j, i) = sum_k alpha2_{t-1}(k, j) K_t[(k, j), i]
  auto step_forward = [n](const Tensor& prev, const Tensor& k) {
    const Tensor weighted = ad::transpose(ad::transpose(k) * prev);
    return ad::normalize(ad::sum(ad::reshape(weighted, {n, n * n}), 0));
  };
  // beta2_{t}(j, i) = sum_k beta2_{t+1}(i, k) K_{t+1}[(j, i), k]
  auto step_backward = [n](const Tensor& next, const Tensor& k) {
    const Tensor weighted = ad::reshape(k, {n, n * n}) * next;
    return ad::normalize(ad::sum(ad::reshape(weighted, {n * n, n}), 1));
  };

  std::vector<Tensor> alpha(T), beta(T), rows(T);
  alpha[0] = step_forward(Tensor::vector(initial_), kernels[0]);
  for (std::size_t t = 1; t < T; ++t) alpha[t] = step_forward(alpha[t - 1], kernels[t]);
  beta[T - 1] = Tensor::full({n * n}, 1.0 / static_cast<double>(n * n));
  for (std::size_t t = T - 1; t-- > 0;) beta[t] = step_backward(beta[t + 1], kernels[t + 1]);
  for (std::size_t t = 0; t < T; ++t) {
    rows[t] = ad::normalize(ad::sum(ad::reshape(alpha[t] * beta[t], {n, n}), 0));
  }
  return ad::stack(rows);
}

Tensor Hnmc2Layer::logits(const Tensor& inputs) const { return log_checked(forward(inputs)); }

void Hnmc2Layer::collect(const std::string& prefix, std::vector<NamedTensor>& out) const {
  net_.collect(prefix + ".net", out);
}

// ---- HNMC-CN ----

HnmcCnLayer::HnmcCnLayer(std::size_t input_dim, std::size_t n_states,
                         const KernelOptions& options, std::mt19937_64& rng)
    : HnmcCnLayer(input_dim, n_states, options, options, rng) {}

HnmcCnLayer::HnmcCnLayer(std::size_t input_dim, std::size_t n_states,
                         const KernelOptions& options_i, const KernelOptions& options_j,
                         std::mt19937_64& rng)
    : net_i_(input_dim, n_states, n_states, options_i, rng),
      net_j_(input_dim, n_states, n_states, options_j, rng),
      initial_(n_states, 1.0) {}

void HnmcCnLayer::set_initial_state(std::vector<double> weights) {
  initial_ = checked_weights(std::move(weights), net_i_.out_dim(), "initial state");
}

Tensor HnmcCnLayer::forward(const Tensor& inputs) const {
  check_inputs(inputs, input_dim());
  const std::size_t T = inputs.dim(0);
  std::vector<Tensor> kernels(T);
  Tensor prev_i = check_kernel(net_i_.table(Tensor::zeros({input_dim()})), 0);
  for (std::size_t t = 0; t < T; ++t) {
    const Tensor obs = ad::row(inputs, t);
    const Tensor cur_j = check_kernel(net_j_.table(obs), t);
    kernels[t] = prev_i * cur_j;
    if (t + 1 < T) prev_i = check_kernel(net_i_.table(obs), t);
  }
  return chain_posteriors(Tensor::vector(initial_), kernels);
}

Tensor HnmcCnLayer::logits(const Tensor& inputs) const { return log_checked(forward(inputs)); }

void HnmcCnLayer::collect(const std::string& prefix, std::vector<NamedTensor>& out) const {
  net_i_.collect(prefix + ".net_i", out);
  net_j_.collect(prefix + ".net_j", out);
}

}  // namespace hnmc::nn
