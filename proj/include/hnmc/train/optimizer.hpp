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

#ifndef HNMC_TRAIN_OPTIMIZER_HPP_
#define HNMC_TRAIN_OPTIMIZER_HPP_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "hnmc/autodiff/tensor.hpp"

namespace hnmc::train {

enum class OptimizerKind { kAdam, kSgd };

std::string_view to_string(OptimizerKind kind);
OptimizerKind parse_optimizer(std::string_view name);

struct AdamHyper {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::uint64_t t = 0;
};

// One bias-corrected Adam update in place. State vectors are sized on first
// use; throws ShapeError when sizes disagree.
void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr, const AdamHyper& hyper = {});

// theta <- theta - lr * g.
void sgd_step(std::span<double> params, std::span<const double> grads, double lr);

struct ParamGroup {
  std::vector<ad::Tensor> params;
  double lr = 0.0;
};

// Applies one optimizer step per parameter tensor using its accumulated
// gradient. A group with lr == 0 is left bit-identical.
class Optimizer {
 public:
  Optimizer(OptimizerKind kind, std::vector<ParamGroup> groups, AdamHyper hyper = {});

  void step();
  void zero_grad();
  // Rescales all gradients so their joint L2 norm is at most max_norm;
  // returns the norm before clipping.
  double clip_grad_norm(double max_norm);
  double grad_norm() const;

  const std::vector<ParamGroup>& groups() const noexcept { return groups_; }

 private:
  OptimizerKind kind_;
  AdamHyper hyper_;
  std::vector<ParamGroup> groups_;
  std::vector<std::vector<AdamState>> state_;
};

}  // namespace hnmc::train

#endif  // HNMC_TRAIN_OPTIMIZER_HPP_
