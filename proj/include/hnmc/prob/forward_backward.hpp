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

#ifndef HNMC_PROB_FORWARD_BACKWARD_HPP_
#define HNMC_PROB_FORWARD_BACKWARD_HPP_

#include <cstddef>
#include <functional>
#include <variant>
#include <vector>

#include "hnmc/prob/params.hpp"

namespace hnmc::prob {

enum class Pass { kForward, kBackward };

// Returns the factor applied to the table computed at 0-based `position`
// of the given pass; `mass` is the table's current sum. Tables are scaled
// before the next step uses them.
using StepScale = std::function<double(Pass pass, std::size_t position, double mass)>;

// Rescales every table to unit mass.
StepScale normalize_each_step();
// Leaves the raw recursion values untouched.
StepScale keep_unnormalized();

// Forward/backward vectors, one per position.
struct ChainTables {
  std::vector<Vector> alpha;
  std::vector<Vector> beta;
};

// Pairwise tables: alpha[t](j, i) relates x_{t-1} = j and x_t = i at
// 0-based position t >= 1; alpha[0] and beta[0] are empty.
struct PairTables {
  std::vector<Matrix> alpha;
  std::vector<Matrix> beta;
};

// p(x_t = i | y) proportional to alpha_t(i) beta_t(i).
PosteriorMatrix combine(const ChainTables& tables);
// Position 1 sums the second index of alpha_2 * beta_2; later positions sum
// the first index of alpha_t * beta_t.
PosteriorMatrix combine(const PairTables& tables);

// Scaled forward-backward on the generative HMM parameters. Throws
// InferenceError when the observations have probability zero.
PosteriorMatrix classic_fb(const GenerativeHmmParams& params, Observations obs);

// Entropic forward-backward for the order-1 HMM.
ChainTables efb_tables(const EntropicHmmParams& params, Observations obs, const StepScale& scale);
PosteriorMatrix efb(const EntropicHmmParams& params, Observations obs);

// Entropic forward-backward for the order-2 HMM; needs at least two
// observations.
PairTables efb2_tables(const EntropicHmmParams& params, const Table3& order2, Observations obs,
                       const StepScale& scale);
PosteriorMatrix efb2(const EntropicHmmParams& params, const Table3& order2, Observations obs);

// Entropic forward-backward for the complexified-noise HMM; needs cn_I and
// cn_J, and throws ParameterError on a zero pi(j) a_j(i) denominator.
ChainTables efb_cn_tables(const EntropicHmmParams& params, Observations obs,
                          const StepScale& scale);
PosteriorMatrix efb_cn(const EntropicHmmParams& params, Observations obs);

inline constexpr std::size_t kUnnormalizedMaxLength = 20;

// Probability-valued recursions on the generative law: alpha'_t = p(x_t,
// y_{1:t}) and beta'_t = p(y_{t+1:T} | x_t) for the HMM; the pairwise
// p(x_{t-1}, x_t, y_{1:t}) and p(y_{t+1:T} | x_{t-1}, x_t) for the order-2
// model; p(x_t, y_{1:t}) and p(y_{t+1:T} | x_t, y_t) for the CN model.
using UnnormalizedTables = std::variant<ChainTables, PairTables>;
UnnormalizedTables unnormalized_recursions(ModelKind kind, const GenerativeHmmParams& params,
                                           Observations obs);

}  // namespace hnmc::prob

#endif  // HNMC_PROB_FORWARD_BACKWARD_HPP_
