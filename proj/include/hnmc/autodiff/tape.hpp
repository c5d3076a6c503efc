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

#ifndef HNMC_AUTODIFF_TAPE_HPP_
#define HNMC_AUTODIFF_TAPE_HPP_

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "hnmc/autodiff/tensor.hpp"

namespace hnmc::ad {

// Receives d(loss)/d(output) and accumulates into the inputs' gradients.
using Pullback = std::function<void(std::span<const double> grad_output)>;

// Records differentiable operations executed on the current thread.
//
// Constructing a Tape makes it the thread's active tape until it is
// destroyed (tapes nest; the previous one is restored). Operations whose
// inputs require gradients are appended in execution order, and backward()
// walks the record in exact reverse, so a tape is rebuilt per forward pass.
// Without an active tape, operations compute values only.
class Tape {
 public:
  Tape();
  ~Tape();
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // Accumulates d(loss)/d(leaf) into every requires_grad leaf reachable
  // from `loss`. Intermediate gradients are reset on each call, so calling
  // twice doubles the leaf gradients.
  void backward(const Tensor& loss);

  std::size_t size() const noexcept { return entries_.size(); }
  // Number of records visited by the most recent backward() call.
  std::size_t last_visit_count() const noexcept { return visits_; }

  void record(std::shared_ptr<detail::Node> output, Pullback pullback);

  static Tape* current() noexcept;

 private:
  struct Entry {
    std::shared_ptr<detail::Node> output;
    Pullback pullback;
  };

  std::vector<Entry> entries_;
  Tape* previous_;
  std::size_t visits_ = 0;
};

// Temporarily disables recording on this thread.
class NoGradScope {
 public:
  NoGradScope();
  ~NoGradScope();
  NoGradScope(const NoGradScope&) = delete;
  NoGradScope& operator=(const NoGradScope&) = delete;

 private:
  Tape* saved_;
};

}  // namespace hnmc::ad

#endif  // HNMC_AUTODIFF_TAPE_HPP_
