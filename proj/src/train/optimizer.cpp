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

#include "hnmc/train/optimizer.hpp"

#include <cmath>
#include <string>

#include "hnmc/errors.hpp"

namespace hnmc::train {

std::string_view to_string(OptimizerKind kind) {
  return kind == OptimizerKind::kAdam ? "adam" : "sgd";
}

OptimizerKind parse_optimizer(std::string_view name) {
  if (name == "adam") return OptimizerKind::kAdam;
  if (name == "sgd") return OptimizerKind::kSgd;
  throw ParameterError("unknown optimizer '" + std::string(name) + "' (adam|sgd)");
}

void adam_step(std::span<double> params, std::span<const double> grads, AdamState& state,
               double lr, const AdamHyper& hyper) {
  if (grads.size() != params.size()) {
    throw ShapeError("adam_step: " + std::to_string(params.size()) + " params vs " +
                     std::to_string(grads.size()) + " grads");
  }
  if (state.t == 0 && state.m.empty()) {
    state.m.assign(params.size(), 0.0);
    state.v.assign(params.size(), 0.0);
  }
  if (state.m.size() != params.size() || state.v.size() != params.size()) {
    throw ShapeError("adam_step: optimizer state sized for " + std::to_string(state.m.size()) +
                     " entries, got " + std::to_string(params.size()));
  }
  ++state.t;
  const double t = static_cast<double>(state.t);
  const double c1 = 1.0 - std::pow(hyper.beta1, t);
  const double c2 = 1.0 - std::pow(hyper.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = hyper.beta1 * state.m[i] + (1.0 - hyper.beta1) * g;
    state.v[i] = hyper.beta2 * state.v[i] + (1.0 - hyper.beta2) * g * g;
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + hyper.eps);
  }
}

void sgd_step(std::span<double> params, std::span<const double> grads, double lr) {
  if (grads.size() != params.size()) throw ShapeError("sgd_step: size mismatch");
  for (std::size_t i = 0; i < params.size(); ++i) params[i] -= lr * grads[i];
}

Optimizer::Optimizer(OptimizerKind kind, std::vector<ParamGroup> groups, AdamHyper hyper)
    : kind_(kind), hyper_(hyper), groups_(std::move(groups)) {
  for (const auto& g : groups_) {
    if (!(g.lr >= 0.0) || !std::isfinite(g.lr)) {
      throw ParameterError("learning rate must be finite and >= 0");
    }
    for (const auto& p : g.params) {
      if (!p.requires_grad()) throw ParameterError("optimizer given a tensor without gradient");
    }
    state_.emplace_back(g.params.size());
  }
}

void Optimizer::step() {
  for (std::size_t gi = 0; gi < groups_.size(); ++gi) {
    auto& group = groups_[gi];
    // Skipping frozen groups keeps them bit-identical and their moments untouched.
    if (group.lr == 0.0) continue;
    for (std::size_t pi = 0; pi < group.params.size(); ++pi) {
      auto& p = group.params[pi];
      if (kind_ == OptimizerKind::kAdam) {
        adam_step(p.mutable_values(), p.grad(), state_[gi][pi], group.lr, hyper_);
      } else {
        sgd_step(p.mutable_values(), p.grad(), group.lr);
      }
    }
  }
}

void Optimizer::zero_grad() {
  for (auto& g : groups_) {
    for (auto& p : g.params) p.zero_grad();
  }
}

double Optimizer::grad_norm() const {
  double sq = 0.0;
  for (const auto& g : groups_) {
    for (const auto& p : g.params) {
      for (double x : p.grad()) sq += x * x;
    }
  }
  return std::sqrt(sq);
}

double Optimizer::clip_grad_norm(double max_norm) {
  const double norm = grad_norm();
  if (max_norm > 0.0 && norm > max_norm) {
    const double scale = max_norm / norm;
    for (auto& g : groups_) {
      for (auto& p : g.params) {
        for (double& x : p.mutable_grad()) x *= scale;
      }
    }
  }
  return norm;
}

}  // namespace hnmc::train
