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

#include "hnmc/autodiff/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "hnmc/autodiff/tape.hpp"
#include "hnmc/errors.hpp"

namespace hnmc::ad {

GradCheckResult check_gradients(const std::function<Tensor()>& loss,
                                const std::vector<Tensor>& inputs,
                                const GradCheckOptions& options) {
  std::vector<Tensor> params = inputs;
  for (Tensor& p : params) {
    if (!p.requires_grad()) throw std::invalid_argument("check_gradients: input without gradient");
    p.zero_grad();
  }

  std::vector<std::vector<double>> analytic;
  {
    Tape tape;
    tape.backward(loss());
    for (const Tensor& p : params) analytic.emplace_back(p.grad().begin(), p.grad().end());
  }

  GradCheckResult result;
  NoGradScope no_grad;
  for (std::size_t t = 0; t < params.size(); ++t) {
    auto values = params[t].mutable_values();
    for (std::size_t k = 0; k < values.size(); ++k) {
      const double saved = values[k];
      values[k] = saved + options.step;
      const double up = loss().item();
      values[k] = saved - options.step;
      const double down = loss().item();
      values[k] = saved;
      const double numeric = (up - down) / (2.0 * options.step);
      const double a = analytic[t][k];
      const double abs_err = std::abs(a - numeric);
      const double rel_err =
          abs_err / std::max({std::abs(a), std::abs(numeric), options.relative_floor});
      if (!std::isfinite(rel_err)) throw NumericalError("check_gradients: non-finite loss");
      result.max_absolute_error = std::max(result.max_absolute_error, abs_err);
      if (rel_err > result.max_relative_error || result.checked == 0) {
        result.max_relative_error = std::max(result.max_relative_error, rel_err);
        result.worst_tensor = t;
        result.worst_index = k;
        result.worst_analytic = a;
        result.worst_numeric = numeric;
      }
      ++result.checked;
    }
  }
  for (Tensor& p : params) p.zero_grad();
  return result;
}

}  // namespace hnmc::ad
