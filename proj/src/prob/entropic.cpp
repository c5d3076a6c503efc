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

#include "hnmc/prob/entropic.hpp"

#include <string>

#include "hnmc/errors.hpp"

namespace hnmc::prob {

EntropicHmmParams derive_entropic(const GenerativeHmmParams& p) {
  const std::size_t N = p.n_states(), M = p.n_obs();
  if (N == 0 || M == 0 || p.b.rows() != p.pi.size()) {
    throw ParameterError("generative parameters have inconsistent sizes");
  }
  EntropicHmmParams e;
  e.pi = p.pi;
  e.a = p.a;
  e.L.resize(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(N));
  for (Eigen::Index y = 0; y < e.L.rows(); ++y) {
    const Vector joint = p.pi.cwiseProduct(p.b.col(y));
    const double py = joint.sum();
    if (!(py > 0.0)) {
      throw ParameterError("symbol " + std::to_string(y) + " has zero marginal probability");
    }
    e.L.row(y) = joint.transpose() / py;
  }
  if (p.cn) {
    const CnLaw& law = *p.cn;
    e.cn_I = law.transition;
    Table3 J(N, M, N);
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t y = 0; y < M; ++y) {
        double total = 0.0;
        for (std::size_t j = 0; j < N; ++j) {
          const double w = p.pi(static_cast<Eigen::Index>(j)) *
                           p.a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) *
                           law.emission(j, i, y);
          J(i, y, j) = w;
          total += w;
        }
        if (!(total > 0.0)) {
          throw ParameterError("CN context (x=" + std::to_string(i) + ", y=" + std::to_string(y) +
                               ") has zero probability");
        }
        for (std::size_t j = 0; j < N; ++j) J(i, y, j) /= total;
      }
    e.cn_J = std::move(J);
  }
  return e;
}

}  // namespace hnmc::prob
