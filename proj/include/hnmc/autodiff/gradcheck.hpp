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

#ifndef HNMC_AUTODIFF_GRADCHECK_HPP_
#define HNMC_AUTODIFF_GRADCHECK_HPP_

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "hnmc/autodiff/tensor.hpp"

namespace hnmc::ad {

struct GradCheckOptions {
  double step = 1e-6;
  // Denominator floor of the relative error |a - n| / max(|a|, |n|, floor),
  // so that gradients that vanish are compared in absolute terms.
  double relative_floor = 1e-6;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  double max_absolute_error = 0.0;
  std::size_t checked = 0;
  // Location of the worst relative error.
  std::size_t worst_tensor = 0;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
};

// Compares reverse-mode gradients of `loss` with respect to every entry of
// `inputs` against central finite differences. `loss` must build its graph
// from the given tensors and return a scalar; it is called once under a
// tape and 2 * (number of entries) more times without one. Gradients of
// `inputs` are zeroed before and after.
GradCheckResult check_gradients(const std::function<Tensor()>& loss,
                                const std::vector<Tensor>& inputs,
                                const GradCheckOptions& options = {});

}  // namespace hnmc::ad

#endif  // HNMC_AUTODIFF_GRADCHECK_HPP_
