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

#include "hnmc/prob/forward_backward.hpp"

#include <cmath>
#include <string>

#include "hnmc/errors.hpp"

namespace hnmc::prob {
namespace {

using Index = Eigen::Index;

void check_symbols(Observations obs, std::size_t n_obs) {
  if (obs.empty()) throw ShapeError("empty observation sequence");
  for (int y : obs) {
    if (y < 0 || static_cast<std::size_t>(y) >= n_obs) {
      throw ParameterError("observation symbol " + std::to_string(y) + " out of range");
    }
  }
}

void check_entropic(const EntropicHmmParams& p) {
  const Index n = p.pi.size();
  if (n == 0 || p.a.rows() != n || p.a.cols() != n || p.L.cols() != n) {
    throw ParameterError("entropic parameters have inconsistent sizes");
  }
  if ((p.pi.array() <= 0.0).any()) throw ParameterError("pi must be strictly positive");
}

template <typename Table>
void apply_scale(Table& table, const StepScale& scale, Pass pass, std::size_t t) {
  const double mass = table.sum();
  if (!(mass > 0.0) || !std::isfinite(mass)) {
    throw InferenceError(std::string(pass == Pass::kForward ? "forward" : "backward") +
                         " table vanished at position " + std::to_string(t + 1));
  }
  const double factor = scale(pass, t, mass);
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw ParameterError("step scale must be positive and finite");
  }
  if (factor != 1.0) table *= factor;
}

Vector normalized_row(const Vector& v, std::size_t t) {
  const double total = v.sum();
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw InferenceError("posterior vanished at position " + std::to_string(t + 1));
  }
  return v / total;
}

// L_y(i) / pi(i).
Vector ratio(const EntropicHmmParams& p, int y) {
  return p.L.row(y).transpose().cwiseQuotient(p.pi);
}

const Table3& need(const std::optional<Table3>& t, const char* what) {
  if (!t) throw ParameterError(std::string("missing ") + what);
  return *t;
}

}  // namespace

StepScale normalize_each_step() {
  return [](Pass, std::size_t, double mass) { return 1.0 / mass; };
}

StepScale keep_unnormalized() {
  return [](Pass, std::size_t, double) { return 1.0; };
}

PosteriorMatrix combine(const ChainTables& tables) {
  const std::size_t T = tables.alpha.size();
  if (T == 0 || tables.beta.size() != T) throw ShapeError("forward/backward length mismatch");
  Matrix out(static_cast<Index>(T), tables.alpha[0].size());
  for (std::size_t t = 0; t < T; ++t) {
    out.row(static_cast<Index>(t)) =
        normalized_row(tables.alpha[t].cwiseProduct(tables.beta[t]), t).transpose();
  }
  return {out};
}

PosteriorMatrix combine(const PairTables& tables) {
  const std::size_t T = tables.alpha.size();
  if (T < 2 || tables.beta.size() != T) throw ShapeError("pair tables need T >= 2");
  const Index n = tables.alpha[1].rows();
  Matrix out(static_cast<Index>(T), n);
  const Matrix first = tables.alpha[1].cwiseProduct(tables.beta[1]);
  out.row(0) = normalized_row(first.rowwise().sum(), 0).transpose();
  for (std::size_t t = 1; t < T; ++t) {
    const Matrix prod = tables.alpha[t].cwiseProduct(tables.beta[t]);
    out.row(static_cast<Index>(t)) = normalized_row(prod.colwise().sum().transpose(), t).transpose();
  }
  return {out};
}

PosteriorMatrix classic_fb(const GenerativeHmmParams& p, Observations obs) {
  check_symbols(obs, p.n_obs());
  const std::size_t T = obs.size();
  const StepScale scale = normalize_each_step();
  ChainTables tab;
  tab.alpha.resize(T);
  tab.beta.resize(T);
  tab.alpha[0] = p.pi.cwiseProduct(p.b.col(obs[0]));
  apply_scale(tab.alpha[0], scale, Pass::kForward, 0);
  for (std::size_t t = 1; t < T; ++t) {
    tab.alpha[t] = (p.a.transpose() * tab.alpha[t - 1]).cwiseProduct(p.b.col(obs[t]));
    apply_scale(tab.alpha[t], scale, Pass::kForward, t);
  }
  tab.beta[T - 1] = Vector::Ones(p.pi.size());
  for (std::size_t t = T - 1; t-- > 0;) {
    tab.beta[t] = p.a * p.b.col(obs[t + 1]).cwiseProduct(tab.beta[t + 1]);
    apply_scale(tab.beta[t], scale, Pass::kBackward, t);
  }
  return combine(tab);
}

ChainTables efb_tables(const EntropicHmmParams& p, Observations obs, const StepScale& scale) {
  check_entropic(p);
  check_symbols(obs, p.n_obs());
  const std::size_t T = obs.size();
  ChainTables tab;
  tab.alpha.resize(T);
  tab.beta.resize(T);
  tab.alpha[0] = p.L.row(obs[0]).transpose();
  apply_scale(tab.alpha[0], scale, Pass::kForward, 0);
  for (std::size_t t = 1; t < T; ++t) {
    tab.alpha[t] = (p.a.transpose() * tab.alpha[t - 1]).cwiseProduct(ratio(p, obs[t]));
    apply_scale(tab.alpha[t], scale, Pass::kForward, t);
  }
  tab.beta[T - 1] = Vector::Ones(p.pi.size());
  apply_scale(tab.beta[T - 1], scale, Pass::kBackward, T - 1);
  for (std::size_t t = T - 1; t-- > 0;) {
    tab.beta[t] = p.a * ratio(p, obs[t + 1]).cwiseProduct(tab.beta[t + 1]);
    apply_scale(tab.beta[t], scale, Pass::kBackward, t);
  }
  return tab;
}

PosteriorMatrix efb(const EntropicHmmParams& params, Observations obs) {
  return combine(efb_tables(params, obs, normalize_each_step()));
}

PairTables efb2_tables(const EntropicHmmParams& p, const Table3& a2, Observations obs,
                       const StepScale& scale) {
  check_entropic(p);
  check_symbols(obs, p.n_obs());
  const std::size_t T = obs.size();
  const std::size_t N = p.n_states();
  if (T < 2) throw ShapeError("order-2 entropic forward-backward needs T >= 2");
  if (a2.dim0() != N || a2.dim1() != N || a2.dim2() != N) {
    throw ParameterError("order-2 table must be N x N x N");
  }
  const Index n = static_cast<Index>(N);
  PairTables tab;
  tab.alpha.resize(T);
  tab.beta.resize(T);

  {
    const Vector first = p.L.row(obs[0]).transpose();
    const Vector r = ratio(p, obs[1]);
    Matrix& al = tab.alpha[1];
    al.resize(n, n);
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i) al(j, i) = first(j) * p.a(j, i) * r(i);
    apply_scale(al, scale, Pass::kForward, 1);
  }
  for (std::size_t t = 2; t < T; ++t) {
    const Vector r = ratio(p, obs[t]);
    const Matrix& prev = tab.alpha[t - 1];
    Matrix next = Matrix::Zero(n, n);
    for (std::size_t k = 0; k < N; ++k)
      for (std::size_t j = 0; j < N; ++j) {
        const double w = prev(static_cast<Index>(k), static_cast<Index>(j));
        const auto row = a2.fiber(k, j);
        for (std::size_t i = 0; i < N; ++i) next(static_cast<Index>(j), static_cast<Index>(i)) += w * row[i];
      }
    next *= r.asDiagonal();
    tab.alpha[t] = std::move(next);
    apply_scale(tab.alpha[t], scale, Pass::kForward, t);
  }

  tab.beta[T - 1] = Matrix::Ones(n, n);
  apply_scale(tab.beta[T - 1], scale, Pass::kBackward, T - 1);
  for (std::size_t t = T - 1; t-- > 1;) {
    const Vector r = ratio(p, obs[t + 1]);
    const Matrix& after = tab.beta[t + 1];
    Matrix cur(n, n);
    for (std::size_t j = 0; j < N; ++j)
      for (std::size_t i = 0; i < N; ++i) {
        const auto row = a2.fiber(j, i);
        double s = 0.0;
        for (std::size_t k = 0; k < N; ++k) {
          s += after(static_cast<Index>(i), static_cast<Index>(k)) * row[k] * r(static_cast<Index>(k));
        }
        cur(static_cast<Index>(j), static_cast<Index>(i)) = s;
      }
    tab.beta[t] = std::move(cur);
    apply_scale(tab.beta[t], scale, Pass::kBackward, t);
  }
  return tab;
}

PosteriorMatrix efb2(const EntropicHmmParams& params, const Table3& order2, Observations obs) {
  return combine(efb2_tables(params, order2, obs, normalize_each_step()));
}

ChainTables efb_cn_tables(const EntropicHmmParams& p, Observations obs, const StepScale& scale) {
  check_entropic(p);
  check_symbols(obs, p.n_obs());
  const Table3& I = need(p.cn_I, "cn_I table");
  const Table3& J = need(p.cn_J, "cn_J table");
  const std::size_t N = p.n_states(), M = p.n_obs();
  if (I.dim0() != N || I.dim1() != M || I.dim2() != N || J.dim0() != N || J.dim1() != M ||
      J.dim2() != N) {
    throw ParameterError("cn_I and cn_J must be N x M x N");
  }
  // pi(j) a_j(i) shows up as a denominator in both directions.
  const Matrix flow = p.pi.asDiagonal() * p.a;
  if ((flow.array() <= 0.0).any()) throw ParameterError("pi(j) a_j(i) must be positive");

  const std::size_t T = obs.size();
  const Index n = static_cast<Index>(N);
  ChainTables tab;
  tab.alpha.resize(T);
  tab.beta.resize(T);
  tab.alpha[0] = p.L.row(obs[0]).transpose();
  apply_scale(tab.alpha[0], scale, Pass::kForward, 0);
  for (std::size_t t = 1; t < T; ++t) {
    const auto yp = static_cast<std::size_t>(obs[t - 1]), yc = static_cast<std::size_t>(obs[t]);
    Vector next = Vector::Zero(n);
    for (std::size_t i = 0; i < N; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < N; ++j) {
        s += tab.alpha[t - 1](static_cast<Index>(j)) * I(j, yp, i) * J(i, yc, j) /
             flow(static_cast<Index>(j), static_cast<Index>(i));
      }
      next(static_cast<Index>(i)) = s * p.L(static_cast<Index>(yc), static_cast<Index>(i));
    }
    tab.alpha[t] = std::move(next);
    apply_scale(tab.alpha[t], scale, Pass::kForward, t);
  }
  tab.beta[T - 1] = Vector::Ones(n);
  apply_scale(tab.beta[T - 1], scale, Pass::kBackward, T - 1);
  for (std::size_t t = T - 1; t-- > 0;) {
    const auto yc = static_cast<std::size_t>(obs[t]), yn = static_cast<std::size_t>(obs[t + 1]);
    Vector cur(n);
    for (std::size_t i = 0; i < N; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < N; ++j) {
        s += tab.beta[t + 1](static_cast<Index>(j)) * I(i, yc, j) *
             p.L(static_cast<Index>(yn), static_cast<Index>(j)) * J(j, yn, i) /
             flow(static_cast<Index>(i), static_cast<Index>(j));
      }
      cur(static_cast<Index>(i)) = s;
    }
    tab.beta[t] = std::move(cur);
    apply_scale(tab.beta[t], scale, Pass::kBackward, t);
  }
  return tab;
}

PosteriorMatrix efb_cn(const EntropicHmmParams& params, Observations obs) {
  return combine(efb_cn_tables(params, obs, normalize_each_step()));
}

UnnormalizedTables unnormalized_recursions(ModelKind kind, const GenerativeHmmParams& p,
                                           Observations obs) {
  check_symbols(obs, p.n_obs());
  const std::size_t T = obs.size();
  if (T > kUnnormalizedMaxLength) {
    throw CapExceededError("unnormalized recursions are capped at T=" +
                           std::to_string(kUnnormalizedMaxLength));
  }
  validate(p, kind);
  const std::size_t N = p.n_states();
  const Index n = static_cast<Index>(N);

  if (kind == ModelKind::kHmm) {
    ChainTables tab;
    tab.alpha.resize(T);
    tab.beta.resize(T);
    tab.alpha[0] = p.pi.cwiseProduct(p.b.col(obs[0]));
    for (std::size_t t = 1; t < T; ++t) {
      tab.alpha[t] = (p.a.transpose() * tab.alpha[t - 1]).cwiseProduct(p.b.col(obs[t]));
    }
    tab.beta[T - 1] = Vector::Ones(n);
    for (std::size_t t = T - 1; t-- > 0;) {
      tab.beta[t] = p.a * p.b.col(obs[t + 1]).cwiseProduct(tab.beta[t + 1]);
    }
    return tab;
  }

  if (kind == ModelKind::kHmm2) {
    if (T < 2) throw ShapeError("order-2 recursions need T >= 2");
    const Table3& a2 = *p.order2;
    PairTables tab;
    tab.alpha.resize(T);
    tab.beta.resize(T);
    tab.alpha[1].resize(n, n);
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i) {
        tab.alpha[1](j, i) = p.pi(j) * p.b(j, obs[0]) * p.a(j, i) * p.b(i, obs[1]);
      }
    for (std::size_t t = 2; t < T; ++t) {
      Matrix next = Matrix::Zero(n, n);
      for (std::size_t k = 0; k < N; ++k)
        for (std::size_t j = 0; j < N; ++j)
          for (std::size_t i = 0; i < N; ++i) {
            next(static_cast<Index>(j), static_cast<Index>(i)) +=
                tab.alpha[t - 1](static_cast<Index>(k), static_cast<Index>(j)) * a2(k, j, i) *
                p.b(static_cast<Index>(i), obs[t]);
          }
      tab.alpha[t] = std::move(next);
    }
    tab.beta[T - 1] = Matrix::Ones(n, n);
    for (std::size_t t = T - 1; t-- > 1;) {
      Matrix cur = Matrix::Zero(n, n);
      for (std::size_t j = 0; j < N; ++j)
        for (std::size_t i = 0; i < N; ++i)
          for (std::size_t k = 0; k < N; ++k) {
            cur(static_cast<Index>(j), static_cast<Index>(i)) +=
                tab.beta[t + 1](static_cast<Index>(i), static_cast<Index>(k)) * a2(j, i, k) *
                p.b(static_cast<Index>(k), obs[t + 1]);
          }
      tab.beta[t] = std::move(cur);
    }
    return tab;
  }

  const CnLaw& law = *p.cn;
  ChainTables tab;
  tab.alpha.resize(T);
  tab.beta.resize(T);
  tab.alpha[0] = law.initial.col(obs[0]);
  for (std::size_t t = 1; t < T; ++t) {
    const auto yp = static_cast<std::size_t>(obs[t - 1]), yc = static_cast<std::size_t>(obs[t]);
    Vector next = Vector::Zero(n);
    for (std::size_t j = 0; j < N; ++j)
      for (std::size_t i = 0; i < N; ++i) {
        next(static_cast<Index>(i)) +=
            tab.alpha[t - 1](static_cast<Index>(j)) * law.transition(j, yp, i) * law.emission(j, i, yc);
      }
    tab.alpha[t] = std::move(next);
  }
  tab.beta[T - 1] = Vector::Ones(n);
  for (std::size_t t = T - 1; t-- > 0;) {
    const auto yc = static_cast<std::size_t>(obs[t]), yn = static_cast<std::size_t>(obs[t + 1]);
    Vector cur = Vector::Zero(n);
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) {
        cur(static_cast<Index>(i)) +=
            law.transition(i, yc, j) * law.emission(i, j, yn) * tab.beta[t + 1](static_cast<Index>(j));
      }
    tab.beta[t] = std::move(cur);
  }
  return tab;
}

}  // namespace hnmc::prob
