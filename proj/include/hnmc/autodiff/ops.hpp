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

#ifndef HNMC_AUTODIFF_OPS_HPP_
#define HNMC_AUTODIFF_OPS_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "hnmc/autodiff/tensor.hpp"

// Differentiable operations.
//
// Binary elementwise operations accept operands of identical shape, a
// scalar against anything, or an operand whose shape equals the other's
// shape without its leading dimension (broadcast over that dimension).
namespace hnmc::ad {

Tensor add(const Tensor& x, const Tensor& y);
Tensor sub(const Tensor& x, const Tensor& y);
Tensor mul(const Tensor& x, const Tensor& y);
// Throws DomainError if any denominator is zero.
Tensor div(const Tensor& x, const Tensor& y);

Tensor neg(const Tensor& x);
Tensor scale(const Tensor& x, double factor);
Tensor exp(const Tensor& x);
// Throws DomainError on non-positive input.
Tensor log(const Tensor& x);
Tensor sigmoid(const Tensor& x);
Tensor tanh(const Tensor& x);
// f(x) = 1 + x for x > 0, e^x otherwise. Strictly positive, C^1.
Tensor melu(const Tensor& x);

double melu(double x);
double melu_derivative(double x);

// Sum of all entries, as a rank-0 tensor.
Tensor sum(const Tensor& x);
// Reduction of a rank-2 tensor along `axis` (0: over rows, 1: over columns).
Tensor sum(const Tensor& x, int axis);
// x / sum(x).
Tensor normalize(const Tensor& x);

// [m,k]x[k,n] -> [m,n]; [k]x[k,n] -> [n]; [m,k]x[k] -> [m].
Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& x);
Tensor reshape(const Tensor& x, Shape shape);
// Row `index` of a rank-2 tensor, as a rank-1 tensor.
Tensor row(const Tensor& x, std::size_t index);
// Stacks equally-shaped rank-1 tensors into the rows of a rank-2 tensor.
Tensor stack(const std::vector<Tensor>& rows);
// Concatenates rank-2 tensors with equal row counts along the columns.
Tensor concat_columns(const Tensor& left, const Tensor& right);

// Softmax along `axis` (negative counts from the end).
Tensor softmax(const Tensor& x, int axis = -1);
Tensor log_softmax(const Tensor& x, int axis = -1);
// -log_softmax(logits)[target] for a rank-1 logits vector.
Tensor cross_entropy(const Tensor& logits, std::size_t target);
// Sum over rows of the per-row cross entropy of a [T,C] logits matrix.
Tensor cross_entropy_sum(const Tensor& logits, std::span<const int> targets);

inline Tensor operator+(const Tensor& x, const Tensor& y) { return add(x, y); }
inline Tensor operator-(const Tensor& x, const Tensor& y) { return sub(x, y); }
inline Tensor operator*(const Tensor& x, const Tensor& y) { return mul(x, y); }
inline Tensor operator/(const Tensor& x, const Tensor& y) { return div(x, y); }
inline Tensor operator-(const Tensor& x) { return neg(x); }

}  // namespace hnmc::ad

#endif  // HNMC_AUTODIFF_OPS_HPP_
