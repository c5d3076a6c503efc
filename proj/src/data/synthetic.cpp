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

#include "hnmc/data/synthetic.hpp"

#include <random>
#include <string>

#include "hnmc/errors.hpp"
#include "hnmc/prob/sampling.hpp"

namespace hnmc::data {
namespace {

std::vector<std::string> names(const char* prefix, std::size_t n) {
  std::vector<std::string> v;
  for (std::size_t k = 0; k < n; ++k) v.push_back(prefix + std::to_string(k));
  return v;
}

prob::GenerativeHmmParams sampled_hmm(std::uint64_t seed, const SynthOptions& o) {
  const std::size_t N = o.n_states, M = N * o.symbols_per_state;
  const prob::Matrix a = prob::random_params(prob::ModelKind::kHmm, N, 1, seed).a;
  prob::Matrix b(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(M));
  const double own = (1.0 - o.emission_noise) / static_cast<double>(o.symbols_per_state);
  const double other = M > o.symbols_per_state
                           ? o.emission_noise / static_cast<double>(M - o.symbols_per_state)
                           : 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t y = 0; y < M; ++y) {
      b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(y)) =
          y / o.symbols_per_state == i ? own : other;
    }
  if (M == o.symbols_per_state) b.setConstant(1.0 / static_cast<double>(M));
  return prob::make_hmm(a, b);
}

}  // namespace

std::string_view to_string(SynthKind kind) {
  return kind == SynthKind::kHmmSampled ? "hmm_sampled" : "lookahead";
}

SynthKind parse_synth_kind(std::string_view name) {
  if (name == "hmm_sampled") return SynthKind::kHmmSampled;
  if (name == "lookahead") return SynthKind::kLookahead;
  throw ParameterError("unknown synthetic corpus kind '" + std::string(name) + "'");
}

SyntheticData synth_corpus(SynthKind kind, std::uint64_t seed, std::size_t size,
                           const SynthOptions& o) {
  if (size == 0) throw ParameterError("synthetic corpus size must be positive");
  if (o.min_length == 0 || o.min_length > o.max_length) throw ParameterError("bad length range");
  if (!(o.emission_noise >= 0.0 && o.emission_noise <= 1.0)) {
    throw ParameterError("emission noise must lie in [0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> length(o.min_length, o.max_length);
  SyntheticData out;
  out.corpus.split = Split::kTrain;

  if (kind == SynthKind::kHmmSampled) {
    if (o.n_states == 0 || o.symbols_per_state == 0) throw ParameterError("empty state space");
    out.params = sampled_hmm(rng(), o);
    const auto tokens = names("w", out.params->n_obs());
    out.corpus.labels = LabelMap(names("S", o.n_states));
    out.embeddings = EmbeddingTable::one_hot(tokens);
    for (std::size_t s = 0; s < size; ++s) {
      const prob::SampledSequence seq = prob::sample_sequence(*out.params, length(rng), rng);
      Sentence sent;
      sent.labels = seq.hidden;
      for (int y : seq.observed) sent.tokens.push_back(tokens[static_cast<std::size_t>(y)]);
      out.corpus.sentences.push_back(std::move(sent));
    }
  } else {
    if (o.lookahead_symbols < 2) throw ParameterError("lookahead needs at least two symbols");
    const auto tokens = names("a", o.lookahead_symbols);
    out.corpus.labels = LabelMap(names("C", 2));
    out.embeddings = EmbeddingTable::one_hot(tokens);
    std::uniform_int_distribution<std::size_t> symbol(0, o.lookahead_symbols - 1);
    for (std::size_t s = 0; s < size; ++s) {
      const std::size_t T = length(rng);
      std::vector<std::size_t> y(T);
      for (auto& v : y) v = symbol(rng);
      Sentence sent;
      for (std::size_t t = 0; t < T; ++t) {
        sent.tokens.push_back(tokens[y[t]]);
        sent.labels.push_back(static_cast<int>(y[t + 1 < T ? t + 1 : t] % 2));
      }
      out.corpus.sentences.push_back(std::move(sent));
    }
  }
  out.corpus.labels.freeze();
  return out;
}

}  // namespace hnmc::data
