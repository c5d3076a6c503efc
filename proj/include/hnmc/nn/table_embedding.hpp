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

#ifndef HNMC_NN_TABLE_EMBEDDING_HPP_
#define HNMC_NN_TABLE_EMBEDDING_HPP_

#include <cstddef>
#include <functional>
#include <span>

#include "hnmc/nn/efb_layers.hpp"
#include "hnmc/prob/params.hpp"

// Layers whose nets reproduce the entropic tables of a discrete model when
// fed one-hot observations, so their output is the exact posterior.
namespace hnmc::nn {

// Value of the kernel for (symbol y, context c, output o).
using KernelTable = std::function<double(std::size_t y, std::size_t c, std::size_t o)>;

// Single affine layer with exp output: f = exp(obs_log[y][o] + ctx_log[c][o]).
// Exact whenever the table factorises over (y, o) and (c, o).
void set_separable_table(Kernel& kernel, const prob::Matrix& obs_log, const prob::Matrix& ctx_log);

// One mELU hidden unit per (symbol, context) pair followed by an exp output.
// Each unit fires (value 1 + s/2) only when both its symbol and context are
// present, so any positive table is reproduced up to a relative error of
// order exp(-s/2) times the table's log range. A zero observation gives an
// all-ones output. The kernel needs one hidden layer of width
// obs_dim * n_contexts, mELU hidden and exp output activations.
void set_indicator_table(Kernel& kernel, const KernelTable& table, double sharpness = 100.0);

KernelOptions indicator_options(std::size_t n_symbols, std::size_t n_contexts);

// HNMC layer on one-hot symbols reproducing efb(params).
HnmcLayer embed_hmm(const prob::EntropicHmmParams& params);
// HNMC2 layer reproducing efb2(params, order2).
Hnmc2Layer embed_hmm2(const prob::EntropicHmmParams& params, const prob::Table3& order2);
// HNMC-CN layer reproducing efb_cn(params).
HnmcCnLayer embed_hmm_cn(const prob::EntropicHmmParams& params);

// [T, n_symbols] one-hot rows.
Tensor one_hot_sequence(std::span<const int> symbols, std::size_t n_symbols);

}  // namespace hnmc::nn

#endif  // HNMC_NN_TABLE_EMBEDDING_HPP_
