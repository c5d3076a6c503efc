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

#include "hnmc/nn/table_embedding.hpp"

#include <cmath>
#include <random>

#include "hnmc/errors.hpp"

namespace hnmc::nn {
namespace {

// Tensors are shared handles, so a copy writes through to the kernel.
void fill(Tensor t, double value) {
  for (double& v : t.mutable_values()) v = value;
}

double& at(Tensor t, std::size_t r, std::size_t c) { return t.mutable_values()[r * t.dim(1) + c]; }

double positive_log(double v) {
  if (!(v > 0.0)) throw ParameterError("table entries must be positive to embed");
  return std::log(v);
}

KernelOptions exp_options() {
  KernelOptions o;
  o.output_activation = Activation::kExp;
  return o;
}

}  // namespace

void set_separable_table(Kernel& kernel, const prob::Matrix& obs_log,
                         const prob::Matrix& ctx_log) {
  if (kernel.depth() != 1 || kernel.options().output_activation != Activation::kExp) {
    throw ParameterError("separable tables need a single-layer exp kernel");
  }
  const std::size_t D = kernel.obs_dim(), C = kernel.n_contexts(), O = kernel.out_dim();
  if (static_cast<std::size_t>(obs_log.rows()) != D || static_cast<std::size_t>(obs_log.cols()) != O ||
      static_cast<std::size_t>(ctx_log.rows()) != C || static_cast<std::size_t>(ctx_log.cols()) != O) {
    throw ShapeError("log tables do not match the kernel's shape");
  }
  for (std::size_t o = 0; o < O; ++o) {
    for (std::size_t y = 0; y < D; ++y) at(kernel.weight(0), y, o) = obs_log(y, o);
    for (std::size_t c = 0; c < C; ++c) at(kernel.context_weight(), c, o) = ctx_log(c, o);
  }
  fill(kernel.bias(0), 0.0);
}

KernelOptions indicator_options(std::size_t n_symbols, std::size_t n_contexts) {
  KernelOptions o;
  o.hidden = {n_symbols * n_contexts};
  o.hidden_activation = Activation::kMelu;
  o.output_activation = Activation::kExp;
  return o;
}

void set_indicator_table(Kernel& kernel, const KernelTable& table, double sharpness) {
  const std::size_t D = kernel.obs_dim(), C = kernel.n_contexts(), O = kernel.out_dim();
  const KernelOptions& opt = kernel.options();
  if (kernel.depth() != 2 || opt.hidden.at(0) != D * C || opt.hidden_activation != Activation::kMelu ||
      opt.output_activation != Activation::kExp) {
    throw ParameterError("indicator tables need indicator_options(obs_dim, n_contexts)");
  }
  const double s = sharpness;
  const double on = 1.0 + 0.5 * s;
  fill(kernel.weight(0), 0.0);
  fill(kernel.context_weight(), 0.0);
  fill(kernel.bias(0), -1.5 * s);
  fill(kernel.bias(1), 0.0);
  for (std::size_t y = 0; y < D; ++y)
    for (std::size_t c = 0; c < C; ++c) {
      const std::size_t u = y * C + c;
      at(kernel.weight(0), y, u) = s;
      at(kernel.context_weight(), c, u) = s;
      for (std::size_t o = 0; o < O; ++o) at(kernel.weight(1), u, o) = positive_log(table(y, c, o)) / on;
    }
}

HnmcLayer embed_hmm(const prob::EntropicHmmParams& p) {
  const std::size_t N = p.n_states(), M = p.n_obs();
  std::mt19937_64 rng(0);
  HnmcLayer layer(M, N, exp_options(), rng);
  prob::Matrix obs_log(M, N), ctx_log(N, N);
  for (std::size_t y = 0; y < M; ++y)
    for (std::size_t i = 0; i < N; ++i) obs_log(y, i) = positive_log(p.L(y, i) / p.pi(i));
  for (std::size_t j = 0; j < N; ++j)
    for (std::size_t i = 0; i < N; ++i) ctx_log(j, i) = positive_log(p.a(j, i));
  set_separable_table(layer.net(), obs_log, ctx_log);
  layer.set_initial_state({p.pi.data(), p.pi.data() + N});
  return layer;
}

Hnmc2Layer embed_hmm2(const prob::EntropicHmmParams& p, const prob::Table3& a2) {
  const std::size_t N = p.n_states(), M = p.n_obs();
  std::mt19937_64 rng(0);
  Hnmc2Layer layer(M, N, exp_options(), rng);
  prob::Matrix obs_log(M, N), ctx_log(N * N, N);
  for (std::size_t y = 0; y < M; ++y)
    for (std::size_t i = 0; i < N; ++i) obs_log(y, i) = positive_log(p.L(y, i) / p.pi(i));
  for (std::size_t k = 0; k < N; ++k)
    for (std::size_t j = 0; j < N; ++j)
      for (std::size_t i = 0; i < N; ++i) ctx_log(k * N + j, i) = positive_log(a2(k, j, i));
  set_separable_table(layer.net(), obs_log, ctx_log);
  // Stationary pair law p(x_{-1}, x_0) = pi(m) a_m(k).
  std::vector<double> pairs(N * N);
  for (std::size_t m = 0; m < N; ++m)
    for (std::size_t k = 0; k < N; ++k) pairs[m * N + k] = p.pi(m) * p.a(m, k);
  layer.set_initial_pairs(std::move(pairs));
  return layer;
}

HnmcCnLayer embed_hmm_cn(const prob::EntropicHmmParams& p) {
  if (!p.cn_I || !p.cn_J) throw ParameterError("CN embedding needs cn_I and cn_J");
  const std::size_t N = p.n_states(), M = p.n_obs();
  const prob::Table3& I = *p.cn_I;
  const prob::Table3& J = *p.cn_J;
  std::mt19937_64 rng(0);
  const KernelOptions opt = indicator_options(M, N);
  HnmcCnLayer layer(M, N, opt, rng);
  // net_I(y, j)_i = I_{j,y}(i) / a_j(i)
  set_indicator_table(layer.net_i(),
                      [&](std::size_t y, std::size_t j, std::size_t i) { return I(j, y, i) / p.a(j, i); });
  // net_J(y, j)_i = L_y(i) J_{i,y}(j) / pi(j)
  set_indicator_table(layer.net_j(),
                      [&](std::size_t y, std::size_t j, std::size_t i) {
                        return p.L(y, i) * J(i, y, j) / p.pi(j);
                      });
  // With net_I(0, .) = 1 this makes alpha_1 = L_{y_1}.
  layer.set_initial_state({p.pi.data(), p.pi.data() + N});
  return layer;
}

Tensor one_hot_sequence(std::span<const int> symbols, std::size_t n_symbols) {
  std::vector<double> v(symbols.size() * n_symbols, 0.0);
  for (std::size_t t = 0; t < symbols.size(); ++t) {
    const int y = symbols[t];
    if (y < 0 || static_cast<std::size_t>(y) >= n_symbols) throw ParameterError("symbol out of range");
    v[t * n_symbols + static_cast<std::size_t>(y)] = 1.0;
  }
  return Tensor::matrix(symbols.size(), n_symbols, std::move(v));
}

}  // namespace hnmc::nn
