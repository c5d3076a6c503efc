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

#ifndef HNMC_PROB_PARAMS_HPP_
#define HNMC_PROB_PARAMS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace hnmc::prob {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Observations = std::span<const int>;

enum class ModelKind { kHmm, kHmm2, kHmmCn };

std::string_view to_string(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

// Dense 3-index table; the last index is contiguous.
class Table3 {
 public:
  Table3() = default;
  Table3(std::size_t d0, std::size_t d1, std::size_t d2, double fill = 0.0)
      : d0_(d0), d1_(d1), d2_(d2), data_(d0 * d1 * d2, fill) {}

  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[(i * d1_ + j) * d2_ + k];
  }
  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[(i * d1_ + j) * d2_ + k];
  }
  std::span<const double> fiber(std::size_t i, std::size_t j) const {
    return {data_.data() + (i * d1_ + j) * d2_, d2_};
  }

  std::size_t dim0() const noexcept { return d0_; }
  std::size_t dim1() const noexcept { return d1_; }
  std::size_t dim2() const noexcept { return d2_; }

 private:
  std::size_t d0_ = 0, d1_ = 0, d2_ = 0;
  std::vector<double> data_;
};

// Law of the complexified-noise model as a stationary pairwise Markov chain
// on (x_t, y_t):
//
//   p(x, y) = p(x_1, y_1) * prod_t I_{x_t, y_t}(x_{t+1}) * c_{x_t, x_{t+1}}(y_{t+1}).
//
// Given the hidden chain, the y_t are independent and y_t depends on
// exactly x_{t-1}, x_t and x_{t+1}.
struct CnLaw {
  Matrix initial;     // N x M, p(x_1 = i, y_1 = y), the stationary pair law
  Table3 transition;  // (j, y, i): p(x_{t+1} = i | x_t = j, y_t = y)
  Table3 emission;    // (j, i, y): p(y_{t+1} = y | x_t = j, x_{t+1} = i)
};

// Generative (pi, a, b) parameterisation. For the order-2 and CN models,
// pi, a and b hold the stationary one-step marginals of the richer law.
struct GenerativeHmmParams {
  Vector pi;  // p(x_t = i)
  Matrix a;   // (i, j): p(x_{t+1} = j | x_t = i)
  Matrix b;   // (i, y): p(y_t = y | x_t = i)
  std::optional<Table3> order2;  // (k, j, i): p(x_{t+2} = i | x_t = k, x_{t+1} = j)
  std::optional<CnLaw> cn;

  std::size_t n_states() const { return static_cast<std::size_t>(pi.size()); }
  std::size_t n_obs() const { return static_cast<std::size_t>(b.cols()); }
};

// Entropic (pi, a, L) parameterisation used by the EFB recursions.
struct EntropicHmmParams {
  Vector pi;
  Matrix a;
  Matrix L;  // (y, i): p(x_t = i | y_t = y)
  std::optional<Table3> cn_I;  // (j, y, i): p(x_{t+1} = i | x_t = j, y_t = y)
  std::optional<Table3> cn_J;  // (j, y, i): p(x_t = i | x_{t+1} = j, y_{t+1} = y)

  std::size_t n_states() const { return static_cast<std::size_t>(pi.size()); }
  std::size_t n_obs() const { return static_cast<std::size_t>(L.rows()); }
};

// T x N matrix of p(x_t = i | y_{1:T}).
struct PosteriorMatrix {
  Matrix values;

  std::size_t length() const { return static_cast<std::size_t>(values.rows()); }
};

// Throws ParameterError unless `params` carries a valid law for `kind`.
void validate(const GenerativeHmmParams& params, ModelKind kind);

// Stationary distribution of a row-stochastic matrix.
Vector stationary_distribution(const Matrix& transition);

// Builders that fill pi (and a, b where derived) from the stationary
// regime of the given law.
GenerativeHmmParams make_hmm(Matrix a, Matrix b);
GenerativeHmmParams make_hmm2(Table3 order2, Matrix b);
GenerativeHmmParams make_hmm_cn(Table3 transition, Table3 emission);

// p(y_t = . | x_{t-1}, x_t, x_{t+1}) under a CN law; `prev` / `next` are
// negative at the sequence boundaries.
Vector cn_conditional_emission(const CnLaw& law, int prev, int cur, int next);

}  // namespace hnmc::prob

#endif  // HNMC_PROB_PARAMS_HPP_
