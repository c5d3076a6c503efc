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

#include "hnmc/prob/sampling.hpp"

#include "hnmc/errors.hpp"

namespace hnmc::prob {
namespace {

void fill_row(std::mt19937_64& rng, double lo, double* row, std::size_t n, std::size_t stride) {
  std::uniform_real_distribution<double> u(lo, 1.0);
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) total += row[k * stride] = u(rng);
  for (std::size_t k = 0; k < n; ++k) row[k * stride] /= total;
}

Matrix random_stochastic(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double lo) {
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    fill_row(rng, lo, &m(static_cast<Eigen::Index>(r), 0), cols, static_cast<std::size_t>(m.rows()));
  }
  return m;
}

Table3 random_table(std::mt19937_64& rng, std::size_t d0, std::size_t d1, std::size_t d2,
                    double lo) {
  Table3 t(d0, d1, d2);
  for (std::size_t i = 0; i < d0; ++i)
    for (std::size_t j = 0; j < d1; ++j) fill_row(rng, lo, &t(i, j, 0), d2, 1);
  return t;
}

int draw(std::mt19937_64& rng, const Vector& weights) {
  std::discrete_distribution<int> d(weights.data(), weights.data() + weights.size());
  return d(rng);
}

}  // namespace

GenerativeHmmParams random_params(ModelKind kind, std::size_t n_states, std::size_t n_obs,
                                  std::uint64_t seed, double min_entry) {
  if (n_states == 0 || n_obs == 0) throw ParameterError("need at least one state and symbol");
  if (!(min_entry > 0.0 && min_entry < 1.0)) throw ParameterError("min_entry must lie in (0, 1)");
  std::mt19937_64 rng(seed);
  switch (kind) {
    case ModelKind::kHmm: {
      Matrix a = random_stochastic(rng, n_states, n_states, min_entry);
      Matrix b = random_stochastic(rng, n_states, n_obs, min_entry);
      return make_hmm(std::move(a), std::move(b));
    }
    case ModelKind::kHmm2: {
      Table3 a2 = random_table(rng, n_states, n_states, n_states, min_entry);
      Matrix b = random_stochastic(rng, n_states, n_obs, min_entry);
      return make_hmm2(std::move(a2), std::move(b));
    }
    case ModelKind::kHmmCn: {
      Table3 tr = random_table(rng, n_states, n_obs, n_states, min_entry);
      Table3 em = random_table(rng, n_states, n_states, n_obs, min_entry);
      return make_hmm_cn(std::move(tr), std::move(em));
    }
  }
  throw ParameterError("unknown model kind");
}

SampledSequence sample_sequence(const GenerativeHmmParams& p, std::size_t length,
                                std::mt19937_64& rng) {
  SampledSequence s;
  s.hidden.reserve(length);
  s.observed.reserve(length);
  for (std::size_t t = 0; t < length; ++t) {
    const int x = t == 0 ? draw(rng, p.pi) : draw(rng, p.a.row(s.hidden.back()).transpose());
    s.hidden.push_back(x);
    s.observed.push_back(draw(rng, p.b.row(x).transpose()));
  }
  return s;
}

}  // namespace hnmc::prob
