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

#ifndef HNMC_PROB_SAMPLING_HPP_
#define HNMC_PROB_SAMPLING_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "hnmc/prob/params.hpp"

namespace hnmc::prob {

// Random stationary model of the given kind. Every stochastic row is drawn
// uniformly from [min_entry, 1] and normalised, so all entries are
// positive.
GenerativeHmmParams random_params(ModelKind kind, std::size_t n_states, std::size_t n_obs,
                                  std::uint64_t seed, double min_entry = 0.05);

struct SampledSequence {
  std::vector<int> hidden;
  std::vector<int> observed;
};

// Draws (x_{1:T}, y_{1:T}) from the order-1 HMM law.
SampledSequence sample_sequence(const GenerativeHmmParams& params, std::size_t length,
                                std::mt19937_64& rng);

}  // namespace hnmc::prob

#endif  // HNMC_PROB_SAMPLING_HPP_
