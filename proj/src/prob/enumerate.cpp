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

#include "hnmc/prob/enumerate.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "hnmc/errors.hpp"

namespace hnmc::prob {
namespace {

constexpr double kMaxPaths = 1 << 24;

void check_obs(const GenerativeHmmParams& params, Observations obs) {
  for (int y : obs) {
    if (y < 0 || static_cast<std::size_t>(y) >= params.n_obs()) {
      throw ParameterError("observation symbol " + std::to_string(y) + " out of range");
    }
  }
}

void check_cap(std::size_t n_states, std::size_t length, std::size_t max_length) {
  if (length > max_length) {
    throw CapExceededError("enumeration over T=" + std::to_string(length) +
                           " exceeds the cap of " + std::to_string(max_length));
  }
  if (std::pow(static_cast<double>(n_states), static_cast<double>(length)) > kMaxPaths) {
    throw CapExceededError("N^T hidden paths is too many to enumerate");
  }
}

// Odometer over {0..n-1}^len; returns false after the last path.
bool advance(std::vector<int>& path, int n) {
  for (std::size_t t = path.size(); t-- > 0;) {
    if (++path[t] < n) return true;
    path[t] = 0;
  }
  return false;
}

}  // namespace

double joint_probability(ModelKind kind, const GenerativeHmmParams& p,
                         std::span<const int> x, Observations y) {
  if (x.size() != y.size()) throw ShapeError("hidden and observed lengths differ");
  const std::size_t T = x.size();
  if (T == 0) return 1.0;
  switch (kind) {
    case ModelKind::kHmm: {
      double v = p.pi(x[0]) * p.b(x[0], y[0]);
      for (std::size_t t = 1; t < T; ++t) v *= p.a(x[t - 1], x[t]) * p.b(x[t], y[t]);
      return v;
    }
    case ModelKind::kHmm2: {
      if (!p.order2) throw ParameterError("hmm2 needs an order-2 transition table");
      double v = p.pi(x[0]) * p.b(x[0], y[0]);
      if (T >= 2) v *= p.a(x[0], x[1]) * p.b(x[1], y[1]);
      for (std::size_t t = 2; t < T; ++t) {
        v *= (*p.order2)(static_cast<std::size_t>(x[t - 2]), static_cast<std::size_t>(x[t - 1]),
                         static_cast<std::size_t>(x[t])) *
             p.b(x[t], y[t]);
      }
      return v;
    }
    case ModelKind::kHmmCn: {
      if (!p.cn) throw ParameterError("hmm-cn needs a CN law");
      const CnLaw& law = *p.cn;
      double v = law.initial(x[0], y[0]);
      for (std::size_t t = 1; t < T; ++t) {
        const auto j = static_cast<std::size_t>(x[t - 1]), i = static_cast<std::size_t>(x[t]);
        v *= law.transition(j, static_cast<std::size_t>(y[t - 1]), i) *
             law.emission(j, i, static_cast<std::size_t>(y[t]));
      }
      return v;
    }
  }
  return 0.0;
}

PosteriorMatrix enumerate_posteriors(ModelKind kind, const GenerativeHmmParams& params,
                                     Observations obs, std::size_t max_length) {
  const std::size_t T = obs.size(), N = params.n_states();
  if (T == 0) throw ShapeError("empty observation sequence");
  check_cap(N, T, max_length);
  check_obs(params, obs);
  Matrix acc = Matrix::Zero(static_cast<Eigen::Index>(T), static_cast<Eigen::Index>(N));
  std::vector<int> path(T, 0);
  do {
    const double w = joint_probability(kind, params, path, obs);
    for (std::size_t t = 0; t < T; ++t) acc(static_cast<Eigen::Index>(t), path[t]) += w;
  } while (advance(path, static_cast<int>(N)));
  for (Eigen::Index t = 0; t < acc.rows(); ++t) {
    const double total = acc.row(t).sum();
    if (!(total > 0.0)) throw InferenceError("observation sequence has probability zero");
    acc.row(t) /= total;
  }
  return {acc};
}

double enumerate_evidence(ModelKind kind, const GenerativeHmmParams& params, Observations obs,
                          std::size_t max_length) {
  const std::size_t T = obs.size(), N = params.n_states();
  if (T == 0) return 1.0;
  check_cap(N, T, max_length);
  check_obs(params, obs);
  std::vector<int> path(T, 0);
  double total = 0.0;
  do {
    total += joint_probability(kind, params, path, obs);
  } while (advance(path, static_cast<int>(N)));
  return total;
}

Vector enumerate_observation_marginal(ModelKind kind, const GenerativeHmmParams& params,
                                      std::size_t length, std::size_t position,
                                      std::size_t max_length) {
  if (position >= length) throw ShapeError("position outside the sequence");
  check_cap(params.n_states() * params.n_obs(), length, max_length);
  Vector out = Vector::Zero(static_cast<Eigen::Index>(params.n_obs()));
  std::vector<int> obs(length, 0);
  do {
    out(obs[position]) += enumerate_evidence(kind, params, obs, max_length);
  } while (advance(obs, static_cast<int>(params.n_obs())));
  return out;
}

}  // namespace hnmc::prob
