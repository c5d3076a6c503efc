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

#ifndef HNMC_PROB_ENUMERATE_HPP_
#define HNMC_PROB_ENUMERATE_HPP_

#include <cstddef>
#include <span>

#include "hnmc/prob/params.hpp"

// Brute-force reference computations that sum the exact joint law over
// every hidden path.
namespace hnmc::prob {

inline constexpr std::size_t kDefaultEnumerationCap = 8;

double joint_probability(ModelKind kind, const GenerativeHmmParams& params,
                         std::span<const int> hidden, Observations obs);

// Throws CapExceededError if obs.size() > max_length, InferenceError if the
// observation sequence has probability zero.
PosteriorMatrix enumerate_posteriors(ModelKind kind, const GenerativeHmmParams& params,
                                     Observations obs,
                                     std::size_t max_length = kDefaultEnumerationCap);

// p(y_{1:T}).
double enumerate_evidence(ModelKind kind, const GenerativeHmmParams& params, Observations obs,
                          std::size_t max_length = kDefaultEnumerationCap);

// p(y_position = .) for sequences of `length`, summing over every hidden
// path and every other observation.
Vector enumerate_observation_marginal(ModelKind kind, const GenerativeHmmParams& params,
                                      std::size_t length, std::size_t position,
                                      std::size_t max_length = kDefaultEnumerationCap);

}  // namespace hnmc::prob

#endif  // HNMC_PROB_ENUMERATE_HPP_
