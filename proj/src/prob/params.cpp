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

#include "hnmc/prob/params.hpp"

#include <cmath>
#include <string>

#include "hnmc/errors.hpp"

namespace hnmc::prob {
namespace {

constexpr double kStochasticTol = 1e-9;

void check_entries(std::span<const double> row, const std::string& what) {
  double total = 0.0;
  for (double v : row) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw ParameterError(what + " has a negative or non-finite entry");
    }
    total += v;
  }
  if (std::abs(total - 1.0) > kStochasticTol) {
    throw ParameterError(what + " sums to " + std::to_string(total) + ", not 1");
  }
}

void check_rows(const Matrix& m, const std::string& what) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Vector row = m.row(r).transpose();
    check_entries({row.data(), static_cast<std::size_t>(row.size())},
                  what + " row " + std::to_string(r));
  }
}

void check_fibers(const Table3& t, const std::string& what) {
  for (std::size_t i = 0; i < t.dim0(); ++i) {
    for (std::size_t j = 0; j < t.dim1(); ++j) {
      check_entries(t.fiber(i, j),
                    what + " (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kHmm: return "hmm";
    case ModelKind::kHmm2: return "hmm2";
    case ModelKind::kHmmCn: return "hmm-cn";
  }
  return "unknown";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "hmm") return ModelKind::kHmm;
  if (name == "hmm2") return ModelKind::kHmm2;
  if (name == "hmm-cn" || name == "hmm_cn") return ModelKind::kHmmCn;
  throw ParameterError("unknown model kind '" + std::string(name) + "'");
}

void validate(const GenerativeHmmParams& params, ModelKind kind) {
  const auto n = static_cast<Eigen::Index>(params.n_states());
  if (n == 0 || params.n_obs() == 0) throw ParameterError("empty state or symbol space");
  if (params.a.rows() != n || params.a.cols() != n) throw ParameterError("a must be N x N");
  if (params.b.rows() != n) throw ParameterError("b must have N rows");
  check_entries({params.pi.data(), params.n_states()}, "pi");
  check_rows(params.a, "a");
  check_rows(params.b, "b");
  const std::size_t N = params.n_states(), M = params.n_obs();
  if (kind == ModelKind::kHmm2) {
    if (!params.order2) throw ParameterError("hmm2 needs an order-2 transition table");
    const Table3& t = *params.order2;
    if (t.dim0() != N || t.dim1() != N || t.dim2() != N) {
      throw ParameterError("order-2 table must be N x N x N");
    }
    check_fibers(t, "order-2 a");
  }
  if (kind == ModelKind::kHmmCn) {
    if (!params.cn) throw ParameterError("hmm-cn needs a CN law");
    const CnLaw& law = *params.cn;
    if (law.initial.rows() != n || law.initial.cols() != params.b.cols()) {
      throw ParameterError("CN initial law must be N x M");
    }
    if (law.transition.dim0() != N || law.transition.dim1() != M || law.transition.dim2() != N) {
      throw ParameterError("CN transition must be N x M x N");
    }
    if (law.emission.dim0() != N || law.emission.dim1() != N || law.emission.dim2() != M) {
      throw ParameterError("CN emission must be N x N x M");
    }
    Matrix flat = law.initial;
    Vector all = Eigen::Map<const Vector>(flat.data(), flat.size());
    check_entries({all.data(), static_cast<std::size_t>(all.size())}, "CN initial law");
    check_fibers(law.transition, "CN transition");
    check_fibers(law.emission, "CN emission");
  }
}

Vector stationary_distribution(const Matrix& transition) {
  const Eigen::Index n = transition.rows();
  if (n == 0 || transition.cols() != n) throw ParameterError("transition must be square");
  // pi (P - I) = 0 with one equation swapped for sum(pi) = 1.
  Matrix system = transition.transpose() - Matrix::Identity(n, n);
  system.row(n - 1).setOnes();
  Vector rhs = Vector::Zero(n);
  rhs(n - 1) = 1.0;
  Vector pi = system.fullPivLu().solve(rhs);
  if (!pi.allFinite() || (system * pi - rhs).norm() > 1e-9) {
    throw ParameterError("transition matrix has no unique stationary distribution");
  }
  pi = pi.cwiseMax(0.0);
  return pi / pi.sum();
}

GenerativeHmmParams make_hmm(Matrix a, Matrix b) {
  GenerativeHmmParams p;
  p.pi = stationary_distribution(a);
  p.a = std::move(a);
  p.b = std::move(b);
  validate(p, ModelKind::kHmm);
  return p;
}

GenerativeHmmParams make_hmm2(Table3 order2, Matrix b) {
  const std::size_t N = order2.dim0();
  // Chain on (x_t, x_{t+1}) pairs, pair index k * N + j.
  Matrix pair(N * N, N * N);
  pair.setZero();
  for (std::size_t k = 0; k < N; ++k)
    for (std::size_t j = 0; j < N; ++j)
      for (std::size_t i = 0; i < N; ++i) pair(k * N + j, j * N + i) = order2(k, j, i);
  const Vector rho = stationary_distribution(pair);
  GenerativeHmmParams p;
  p.pi = Vector::Zero(static_cast<Eigen::Index>(N));
  p.a = Matrix::Zero(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
  for (std::size_t k = 0; k < N; ++k)
    for (std::size_t j = 0; j < N; ++j) {
      p.pi(k) += rho(k * N + j);
      p.a(k, j) = rho(k * N + j);
    }
  for (std::size_t k = 0; k < N; ++k) {
    if (p.pi(k) <= 0.0) throw ParameterError("order-2 chain leaves a state unvisited");
    p.a.row(k) /= p.pi(k);
  }
  p.b = std::move(b);
  p.order2 = std::move(order2);
  validate(p, ModelKind::kHmm2);
  return p;
}

GenerativeHmmParams make_hmm_cn(Table3 transition, Table3 emission) {
  const std::size_t N = transition.dim0(), M = transition.dim1();
  // Chain on z = (x, y), index x * M + y.
  Matrix z(N * M, N * M);
  for (std::size_t j = 0; j < N; ++j)
    for (std::size_t y = 0; y < M; ++y)
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t y2 = 0; y2 < M; ++y2)
          z(j * M + y, i * M + y2) = transition(j, y, i) * emission(j, i, y2);
  const Vector mu = stationary_distribution(z);
  GenerativeHmmParams p;
  const auto n = static_cast<Eigen::Index>(N), m = static_cast<Eigen::Index>(M);
  CnLaw law;
  law.initial = Matrix(n, m);
  for (std::size_t x = 0; x < N; ++x)
    for (std::size_t y = 0; y < M; ++y) law.initial(x, y) = mu(x * M + y);
  p.pi = law.initial.rowwise().sum();
  p.a = Matrix::Zero(n, n);
  p.b = Matrix(n, m);
  for (std::size_t j = 0; j < N; ++j) {
    if (p.pi(j) <= 0.0) throw ParameterError("CN chain leaves a state unvisited");
    p.b.row(j) = law.initial.row(j) / p.pi(j);
    for (std::size_t y = 0; y < M; ++y)
      for (std::size_t i = 0; i < N; ++i) p.a(j, i) += law.initial(j, y) * transition(j, y, i);
    p.a.row(j) /= p.pi(j);
  }
  law.transition = std::move(transition);
  law.emission = std::move(emission);
  p.cn = std::move(law);
  validate(p, ModelKind::kHmmCn);
  return p;
}

Vector cn_conditional_emission(const CnLaw& law, int prev, int cur, int next) {
  const auto M = static_cast<std::size_t>(law.initial.cols());
  Vector w(static_cast<Eigen::Index>(M));
  for (std::size_t y = 0; y < M; ++y) {
    const double left = prev < 0 ? law.initial(cur, static_cast<Eigen::Index>(y))
                                 : law.emission(static_cast<std::size_t>(prev),
                                                static_cast<std::size_t>(cur), y);
    const double right =
        next < 0 ? 1.0
                 : law.transition(static_cast<std::size_t>(cur), y, static_cast<std::size_t>(next));
    w(static_cast<Eigen::Index>(y)) = left * right;
  }
  const double total = w.sum();
  if (!(total > 0.0)) throw InferenceError("neighbourhood has probability zero");
  return w / total;
}

}  // namespace hnmc::prob
