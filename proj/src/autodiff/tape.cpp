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

#include "hnmc/autodiff/tape.hpp"

#include <algorithm>

#include "hnmc/errors.hpp"

namespace hnmc::ad {
namespace {

thread_local Tape* current_tape = nullptr;

}  // namespace

Tape::Tape() : previous_(current_tape) { current_tape = this; }

Tape::~Tape() { current_tape = previous_; }

Tape* Tape::current() noexcept { return current_tape; }

void Tape::record(std::shared_ptr<detail::Node> output, Pullback pullback) {
  entries_.push_back({std::move(output), std::move(pullback)});
}

void Tape::backward(const Tensor& loss) {
  if (!loss.defined() || loss.size() != 1) {
    throw ShapeError("backward() needs a scalar loss");
  }
  const detail::Node* target = loss.node();
  std::size_t end = entries_.size();
  while (end > 0 && entries_[end - 1].output.get() != target) --end;
  if (end == 0) throw std::invalid_argument("backward(): loss was not recorded on this tape");

  for (std::size_t i = 0; i < end; ++i) {
    auto& g = entries_[i].output->grad;
    std::fill(g.begin(), g.end(), 0.0);
  }
  entries_[end - 1].output->grad[0] = 1.0;

  visits_ = 0;
  for (std::size_t i = end; i-- > 0;) {
    entries_[i].pullback(entries_[i].output->grad);
    ++visits_;
  }
}

NoGradScope::NoGradScope() : saved_(current_tape) { current_tape = nullptr; }

NoGradScope::~NoGradScope() { current_tape = saved_; }

}  // namespace hnmc::ad
