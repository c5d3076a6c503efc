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

#ifndef HNMC_PROB_ENTROPIC_HPP_
#define HNMC_PROB_ENTROPIC_HPP_

#include "hnmc/prob/params.hpp"

namespace hnmc::prob {

// Bayes inversion of the stationary generative law:
//   L_y(i)      = pi(i) b_i(y) / sum_j pi(j) b_j(y)
//   cn_I        = the CN transition factor
//   J_{i,y}(j)  = pi(j) a_j(i) c_{j,i}(y) / sum_k pi(k) a_k(i) c_{k,i}(y)
// Throws ParameterError on a symbol (or CN context) with zero probability.
EntropicHmmParams derive_entropic(const GenerativeHmmParams& params);

}  // namespace hnmc::prob

#endif  // HNMC_PROB_ENTROPIC_HPP_
