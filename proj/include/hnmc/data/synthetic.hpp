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

#ifndef HNMC_DATA_SYNTHETIC_HPP_
#define HNMC_DATA_SYNTHETIC_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "hnmc/data/corpus.hpp"
#include "hnmc/data/embeddings.hpp"
#include "hnmc/prob/params.hpp"

namespace hnmc::data {

// hmm_sampled: paths of a seeded stationary HMM; labels are the hidden
//   states "S0".."S{N-1}" (label index = state), tokens "w0".."w{M-1}".
//   State i emits its own block of `symbols_per_state` tokens with total
//   probability 1 - emission_noise, the rest spread evenly over the others.
// lookahead: i.i.d. uniform tokens "a0".."a{K-1}"; label_t is "C<y mod 2>"
//   of token t+1, and the last label is the class of the last token. No
//   left-to-right reader can beat chance on positions before the last.
enum class SynthKind { kHmmSampled, kLookahead };

std::string_view to_string(SynthKind kind);
SynthKind parse_synth_kind(std::string_view name);

struct SynthOptions {
  std::size_t n_states = 4;
  std::size_t symbols_per_state = 2;
  double emission_noise = 0.02;
  std::size_t lookahead_symbols = 4;
  std::size_t min_length = 4;
  std::size_t max_length = 10;
};

struct SyntheticData {
  Corpus corpus;
  EmbeddingTable embeddings;  // one-hot over the token vocabulary
  std::optional<prob::GenerativeHmmParams> params;  // hmm_sampled only
};

// Same seed and options give the same corpus. Throws ParameterError on
// size 0 or inconsistent options.
SyntheticData synth_corpus(SynthKind kind, std::uint64_t seed, std::size_t size,
                           const SynthOptions& options = {});

}  // namespace hnmc::data

#endif  // HNMC_DATA_SYNTHETIC_HPP_
