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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "hnmc/autodiff/gradcheck.hpp"
#include "hnmc/autodiff/ops.hpp"
#include "hnmc/autodiff/tape.hpp"
#include "hnmc/errors.hpp"
#include "hnmc/nn/efb_layers.hpp"
#include "hnmc/nn/model.hpp"
#include "hnmc/nn/rnn_layers.hpp"
#include "hnmc/nn/table_embedding.hpp"
#include "hnmc/prob/entropic.hpp"
#include "hnmc/prob/enumerate.hpp"
#include "hnmc/prob/forward_backward.hpp"
#include "hnmc/prob/sampling.hpp"

namespace hnmc::nn {
namespace {

using Obs = std::vector<int>;
using prob::ModelKind;

Tensor random_inputs(std::size_t T, std::size_t D, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(T * D);
  for (double& x : v) x = g(rng);
  return Tensor::matrix(T, D, std::move(v));
}

Obs random_obs(std::size_t T, std::size_t M, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(0, static_cast<int>(M) - 1);
  Obs o(T);
  for (auto& y : o) y = d(rng);
  return o;
}

double max_diff(const Tensor& got, const prob::Matrix& want) {
  EXPECT_EQ(got.dim(0), static_cast<std::size_t>(want.rows()));
  EXPECT_EQ(got.dim(1), static_cast<std::size_t>(want.cols()));
  double m = 0;
  for (std::size_t r = 0; r < got.dim(0); ++r)
    for (std::size_t c = 0; c < got.dim(1); ++c) m = std::max(m, std::abs(got.at(r, c) - want(r, c)));
  return m;
}

double max_diff(const Tensor& a, const Tensor& b) {
  EXPECT_EQ(a.shape(), b.shape());
  double m = 0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

void set_all(Tensor t, double v) {
  for (double& x : t.mutable_values()) x = v;
}

void zero_kernel(Kernel& k, double bias) {
  for (std::size_t l = 0; l < k.depth(); ++l) {
    set_all(k.weight(l), 0.0);
    set_all(k.bias(l), bias);
  }
  set_all(k.context_weight(), 0.0);
}

void expect_probability_rows(const Tensor& out) {
  for (std::size_t t = 0; t < out.dim(0); ++t) {
    double s = 0;
    for (std::size_t i = 0; i < out.dim(1); ++i) {
      EXPECT_GT(out.at(t, i), 0.0);
      s += out.at(t, i);
    }
    EXPECT_NEAR(s, 1.0, 1e-10);
  }
}

// ---- kernel ----

TEST(Kernel, SplitWeightsEqualAffineMapOnConcatenation) {
  std::mt19937_64 rng(3);
  KernelOptions opt;
  opt.hidden = {4};
  Kernel k(3, 5, 2, opt, rng);
  const Tensor y = random_inputs(1, 3, 1);
  const Tensor tab = k.table(ad::row(y, 0));
  ASSERT_EQ(tab.shape(), (ad::Shape{5, 2}));
  for (std::size_t c = 0; c < 5; ++c) {
    std::vector<double> h(4);
    for (std::size_t u = 0; u < 4; ++u) {
      double pre = k.bias(0)[u] + k.context_weight().at(c, u);
      for (std::size_t d = 0; d < 3; ++d) pre += y[d] * k.weight(0).at(d, u);
      h[u] = ad::melu(pre);
    }
    for (std::size_t o = 0; o < 2; ++o) {
      double pre = k.bias(1)[o];
      for (std::size_t u = 0; u < 4; ++u) pre += h[u] * k.weight(1).at(u, o);
      EXPECT_NEAR(tab.at(c, o), ad::melu(pre), 1e-14);
    }
  }
}

TEST(Kernel, InitialisationIsSeededAndBounded) {
  std::mt19937_64 r1(8), r2(8);
  Kernel a(4, 3, 3, {}, r1), b(4, 3, 3, {}, r2);
  EXPECT_EQ(max_diff(a.weight(0), b.weight(0)), 0.0);
  const double bound = 1.0 / std::sqrt(7.0);
  for (double v : a.context_weight().values()) EXPECT_LE(std::abs(v), bound);
}

TEST(Kernel, IndicatorTableReproducesArbitraryPositiveTable) {
  std::mt19937_64 rng(1);
  Kernel k(3, 2, 4, indicator_options(3, 2), rng);
  auto f = [](std::size_t y, std::size_t c, std::size_t o) { return 0.1 + y + 2.0 * c + 0.37 * o * o; };
  set_indicator_table(k, f);
  for (int y = 0; y < 3; ++y) {
    const Tensor tab = k.table(ad::row(one_hot_sequence(Obs{y}, 3), 0));
    for (std::size_t c = 0; c < 2; ++c)
      for (std::size_t o = 0; o < 4; ++o) EXPECT_NEAR(tab.at(c, o) / f(y, c, o), 1.0, 1e-12);
  }
  const Tensor zero = k.table(Tensor::zeros({3}));
  for (double v : zero.values()) EXPECT_NEAR(v, 1.0, 1e-12);
}

// ---- HNMC ----

TEST(HnmcLayer, ConstantKernelGivesNormalizedConstant) {
  std::mt19937_64 rng(2);
  HnmcLayer layer(3, 3, {}, rng);
  zero_kernel(layer.net(), 0.0);
  // mELU(b) with per-output biases 0.5, 1, 2 gives c = (1.5, 2, 3).
  Tensor b = layer.net().bias(0);
  b.mutable_values()[0] = 0.5;
  b.mutable_values()[1] = 1.0;
  b.mutable_values()[2] = 2.0;
  const Tensor out = layer.forward(random_inputs(6, 3, 2));
  for (std::size_t t = 0; t < 6; ++t) {
    EXPECT_NEAR(out.at(t, 0), 1.5 / 6.5, 1e-12);
    EXPECT_NEAR(out.at(t, 1), 2.0 / 6.5, 1e-12);
    EXPECT_NEAR(out.at(t, 2), 3.0 / 6.5, 1e-12);
  }
}

TEST(HnmcLayer, SingleStepIsNormalizedFirstKernel) {
  std::mt19937_64 rng(4);
  HnmcLayer layer(2, 3, {}, rng);
  layer.set_initial_state({0.2, 0.5, 0.3});
  const Tensor x = random_inputs(1, 2, 4);
  const Tensor k = layer.net().table(ad::row(x, 0));
  std::vector<double> want(3, 0.0);
  double s = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) want[i] += layer.initial_state()[j] * k.at(j, i);
    s += want[i];
  }
  const Tensor out = layer.forward(x);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(out.at(0, i), want[i] / s, 1e-14);
}

TEST(HnmcLayer, TableEmbeddingMatchesEntropicPosterior) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = prob::random_params(ModelKind::kHmm, 3, 4, seed);
    const auto e = prob::derive_entropic(g);
    const HnmcLayer layer = embed_hmm(e);
    for (std::size_t T : {1u, 2u, 7u}) {
      const Obs o = random_obs(T, 4, seed * 13 + T);
      EXPECT_LT(max_diff(layer.forward(one_hot_sequence(o, 4)), prob::efb(e, o).values), 1e-8);
    }
  }
}

TEST(HnmcLayer, OutputDependsOnFutureObservations) {
  std::mt19937_64 rng(5);
  HnmcLayer layer(4, 3, {}, rng);
  RnnLayer rnn(4, 3, rng);
  const Tensor x = random_inputs(6, 4, 5);
  for (std::size_t t = 0; t + 1 < 6; ++t) {
    Tensor y = x.detach();
    for (std::size_t d = 0; d < 4; ++d) y.mutable_values()[(t + 1) * 4 + d] += 1.5;
    EXPECT_GT(max_diff(ad::row(layer.forward(x), t), ad::row(layer.forward(y), t)), 1e-6) << t;
    EXPECT_EQ(max_diff(ad::row(rnn.forward(x), t), ad::row(rnn.forward(y), t)), 0.0) << t;
  }
}

TEST(HnmcLayer, NonFiniteKernelIsANumericalError) {
  std::mt19937_64 rng(6);
  HnmcLayer layer(2, 2, {}, rng);
  Tensor b = layer.net().bias(0);
  b.mutable_values()[1] = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(layer.forward(random_inputs(3, 2, 1)), NumericalError);
}

TEST(HnmcLayer, RejectsWrongInputWidth) {
  std::mt19937_64 rng(6);
  HnmcLayer layer(2, 2, {}, rng);
  EXPECT_THROW(layer.forward(random_inputs(3, 3, 1)), ShapeError);
  EXPECT_THROW(layer.set_initial_state({1.0}), ShapeError);
  EXPECT_THROW(layer.set_initial_state({0.0, 0.0}), ParameterError);
}

// ---- HNMC2 ----

TEST(Hnmc2Layer, KernelIgnoringFirstIndexEqualsHnmc) {
  std::mt19937_64 rng(7);
  HnmcLayer one(4, 3, {}, rng);
  Hnmc2Layer two(4, 3, {}, rng);
  Tensor w_ctx = two.net().context_weight();
  for (std::size_t k = 0; k < 3; ++k)
    for (std::size_t j = 0; j < 3; ++j)
      for (std::size_t i = 0; i < 3; ++i) {
        w_ctx.mutable_values()[(k * 3 + j) * 3 + i] = one.net().context_weight().at(j, i);
      }
  Tensor w_obs = two.net().weight(0), b = two.net().bias(0);
  std::copy(one.net().weight(0).values().begin(), one.net().weight(0).values().end(),
            w_obs.mutable_values().begin());
  std::copy(one.net().bias(0).values().begin(), one.net().bias(0).values().end(),
            b.mutable_values().begin());
  for (std::size_t T : {1u, 2u, 6u}) {
    const Tensor x = random_inputs(T, 4, T);
    EXPECT_LT(max_diff(two.forward(x), one.forward(x)), 1e-12);
  }
}

TEST(Hnmc2Layer, ConstantKernelGivesUniformRows) {
  std::mt19937_64 rng(8);
  Hnmc2Layer layer(2, 3, {}, rng);
  zero_kernel(layer.net(), 0.4);
  const Tensor out = layer.forward(random_inputs(4, 2, 8));
  for (double v : out.values()) EXPECT_NEAR(v, 1.0 / 3.0, 1e-14);
}

TEST(Hnmc2Layer, TableEmbeddingMatchesEntropicPosterior) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = prob::random_params(ModelKind::kHmm2, 3, 3, seed);
    const auto e = prob::derive_entropic(g);
    const Hnmc2Layer layer = embed_hmm2(e, *g.order2);
    for (std::size_t T : {2u, 3u, 7u}) {
      const Obs o = random_obs(T, 3, seed * 7 + T);
      EXPECT_LT(max_diff(layer.forward(one_hot_sequence(o, 3)), prob::efb2(e, *g.order2, o).values),
                1e-8);
    }
    // A single observation gives the exact p(x_1 | y_1).
    const Obs o{static_cast<int>(seed % 3)};
    EXPECT_LT(max_diff(layer.forward(one_hot_sequence(o, 3)),
                       prob::enumerate_posteriors(ModelKind::kHmm2, g, o).values),
              1e-8);
  }
}

// ---- HNMC-CN ----

TEST(HnmcCnLayer, TableEmbeddingMatchesEntropicPosterior) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const std::size_t N = 2 + seed % 2;
    const auto g = prob::random_params(ModelKind::kHmmCn, N, 2, seed);
    const auto e = prob::derive_entropic(g);
    const HnmcCnLayer layer = embed_hmm_cn(e);
    for (std::size_t T : {1u, 2u, 5u}) {
      const Obs o = random_obs(T, 2, seed * 5 + T);
      EXPECT_LT(max_diff(layer.forward(one_hot_sequence(o, 2)), prob::efb_cn(e, o).values), 1e-8);
    }
  }
}

TEST(HnmcCnLayer, DegeneratesToHnmc) {
  const auto g = prob::random_params(ModelKind::kHmm, 3, 3, 17);
  const auto e = prob::derive_entropic(g);
  const HnmcLayer plain = embed_hmm(e);
  // net_I carries a_j(i) and ignores the observation; net_J carries
  // L_y(i) / pi(i) and ignores j.
  KernelOptions exp_only;
  exp_only.output_activation = Activation::kExp;
  std::mt19937_64 rng(0);
  HnmcCnLayer cn(3, 3, exp_only, rng);
  set_separable_table(cn.net_i(), prob::Matrix::Zero(3, 3), g.a.array().log().matrix());
  prob::Matrix log_ratio(3, 3);
  for (int y = 0; y < 3; ++y) {
    for (int i = 0; i < 3; ++i) log_ratio(y, i) = std::log(e.L(y, i) / e.pi(i));
  }
  set_separable_table(cn.net_j(), log_ratio, prob::Matrix::Zero(3, 3));
  cn.set_initial_state({e.pi.data(), e.pi.data() + 3});
  for (std::size_t T : {1u, 4u, 8u}) {
    const Tensor x = one_hot_sequence(random_obs(T, 3, T), 3);
    EXPECT_LT(max_diff(cn.forward(x), plain.forward(x)), 1e-8);
  }
}

TEST(HnmcCnLayer, SingleStepIsNormalizedFirstKernel) {
  std::mt19937_64 rng(9);
  HnmcCnLayer layer(2, 3, {}, rng);
  const Tensor x = random_inputs(1, 2, 9);
  const Tensor a0 = layer.net_i().table(Tensor::zeros({2}));
  const Tensor b1 = layer.net_j().table(ad::row(x, 0));
  std::vector<double> want(3, 0.0);
  double s = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) want[i] += a0.at(j, i) * b1.at(j, i);
    s += want[i];
  }
  const Tensor out = layer.forward(x);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(out.at(0, i), want[i] / s, 1e-14);
}

TEST(EfbLayers, OutputsArePositiveProbabilityRows) {
  std::mt19937_64 rng(10);
  const Tensor x = random_inputs(7, 4, 10);
  expect_probability_rows(HnmcLayer(4, 3, {}, rng).forward(x));
  expect_probability_rows(Hnmc2Layer(4, 3, {}, rng).forward(x));
  expect_probability_rows(HnmcCnLayer(4, 3, {}, rng).forward(x));
  KernelOptions deep;
  deep.hidden = {5};
  deep.output_activation = Activation::kSigmoid;
  expect_probability_rows(HnmcLayer(4, 3, deep, rng).forward(x));
}

// ---- RNN ----

TEST(RnnLayer, ZeroWeightsGiveZeroStates) {
  std::mt19937_64 rng(11);
  RnnLayer rnn(3, 4, rng);
  set_all(rnn.w_in(), 0.0);
  set_all(rnn.w_h(), 0.0);
  set_all(rnn.bias(), 0.0);
  const Tensor out = rnn.forward(random_inputs(5, 3, 1));
  for (double v : out.values()) EXPECT_EQ(v, 0.0);
}

TEST(RnnLayer, IsCausal) {
  std::mt19937_64 rng(12);
  RnnLayer rnn(3, 4, rng);
  const Tensor x = random_inputs(6, 3, 2);
  for (std::size_t t = 0; t + 1 < 6; ++t) {
    Tensor y = x.detach();
    y.mutable_values()[(t + 1) * 3] += 2.0;
    const Tensor a = rnn.forward(x), b = rnn.forward(y);
    for (std::size_t s = 0; s <= t; ++s) EXPECT_EQ(max_diff(ad::row(a, s), ad::row(b, s)), 0.0);
    EXPECT_GT(max_diff(ad::row(a, t + 1), ad::row(b, t + 1)), 0.0);
  }
}

TEST(BiRnnLayer, LastPositionSeesFirstObservation) {
  std::mt19937_64 rng(13);
  BiRnnLayer bi(3, 4, rng);
  EXPECT_EQ(bi.output_dim(), 8u);
  const Tensor x = random_inputs(6, 3, 3);
  Tensor y = x.detach();
  y.mutable_values()[0] += 2.0;
  const Tensor a = bi.forward(x), b = bi.forward(y);
  EXPECT_EQ(a.shape(), (ad::Shape{6, 8}));
  EXPECT_GT(max_diff(ad::row(a, 5), ad::row(b, 5)), 1e-9);
  // logits add the two directions.
  const Tensor s = bi.logits(x);
  for (std::size_t t = 0; t < 6; ++t)
    for (std::size_t h = 0; h < 4; ++h) EXPECT_NEAR(s.at(t, h), a.at(t, h) + a.at(t, h + 4), 1e-15);
}

// ---- models ----

ArchitectureSpec spec_for(ModelType type, int arch, std::size_t hs, std::size_t labels,
                          std::size_t dim) {
  ArchitectureSpec s;
  s.type = type;
  s.arch = arch;
  s.hidden_size = hs;
  s.n_labels = labels;
  s.embedding_dim = dim;
  return s;
}

TEST(BuildModel, RnnArch1ParameterCount) {
  const std::size_t D = 7, L = 5;
  EXPECT_EQ(build_model(spec_for(ModelType::kRnn, 1, 0, L, D), 0).parameter_count(), D * L + L * L + L);
}

TEST(BuildModel, HnmcArch1MatchesRnnCount) {
  const std::size_t D = 7, N = 5;
  const std::size_t rnn = build_model(spec_for(ModelType::kRnn, 1, 0, N, D), 0).parameter_count();
  const std::size_t hnmc = build_model(spec_for(ModelType::kHnmc, 1, 0, N, D), 0).parameter_count();
  EXPECT_EQ(hnmc, D * N + N * N + N);
  EXPECT_EQ(hnmc, rnn);
}

TEST(BuildModel, HnmcArch3StacksOnHiddenWidth) {
  LabeledModel m = build_model(spec_for(ModelType::kHnmc, 3, 32, 4, 10), 0);
  ASSERT_EQ(m.n_layers(), 2u);
  EXPECT_EQ(m.layer(0).input_dim(), 10u);
  EXPECT_EQ(m.layer(0).output_dim(), 32u);
  EXPECT_EQ(m.layer(1).input_dim(), 32u);
  EXPECT_EQ(m.layer(1).output_dim(), 4u);
  EXPECT_EQ(m.parameter_groups().size(), 2u);
}

TEST(BuildModel, BirnnArch2HeadIsTwiceHiddenWide) {
  LabeledModel m = build_model(spec_for(ModelType::kBirnn, 2, 20, 6, 10), 0);
  ASSERT_NE(m.head(), nullptr);
  EXPECT_EQ(m.head()->weight().shape(), (ad::Shape{40, 6}));
  EXPECT_EQ(m.logits(random_inputs(3, 10, 0)).shape(), (ad::Shape{3, 6}));
}

TEST(BuildModel, RejectsInvalidSpecs) {
  EXPECT_THROW(build_model(spec_for(ModelType::kHnmc, 4, 3, 3, 3), 0), ParameterError);
  EXPECT_THROW(build_model(spec_for(ModelType::kHnmc, 2, 0, 3, 3), 0), ParameterError);
  EXPECT_THROW(build_model(spec_for(ModelType::kRnn, 1, 0, 0, 3), 0), ParameterError);
  EXPECT_THROW(parse_model_type("lstm"), ParameterError);
}

TEST(BuildModel, SameSeedSameParameters) {
  const auto s = spec_for(ModelType::kHnmcCn, 2, 3, 3, 4);
  const auto a = build_model(s, 5).parameters(), b = build_model(s, 5).parameters();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].name, b[k].name);
    EXPECT_EQ(max_diff(a[k].tensor, b[k].tensor), 0.0);
  }
}

TEST(BuildModel, EntropicArch1LogitsRecoverPosterior) {
  LabeledModel m = build_model(spec_for(ModelType::kHnmc, 1, 0, 3, 4), 2);
  const Tensor x = random_inputs(5, 4, 2);
  EXPECT_LT(max_diff(ad::softmax(m.logits(x), 1), m.layer(0).forward(x)), 1e-14);
}

// ---- gradients ----

struct GradCase {
  ModelType type;
  int arch;
};

class ModelGradients : public ::testing::TestWithParam<GradCase> {};

TEST_P(ModelGradients, MatchFiniteDifferences) {
  const auto [type, arch] = GetParam();
  const LabeledModel m = build_model(spec_for(type, arch, 3, 3, 4), 100 + arch);
  const Tensor x = random_inputs(5, 4, 7);
  const std::vector<int> targets{0, 2, 1, 1, 0};
  std::vector<Tensor> params;
  for (const auto& p : m.parameters()) params.push_back(p.tensor);
  ad::GradCheckOptions opt;
  opt.step = 1e-5;
  const auto r = ad::check_gradients(
      [&] { return ad::cross_entropy_sum(m.logits(x), targets); }, params, opt);
  EXPECT_GT(r.checked, 0u);
  EXPECT_LT(r.max_relative_error, 1e-4) << r.worst_tensor << "[" << r.worst_index << "] analytic "
                                        << r.worst_analytic << " numeric " << r.worst_numeric;
}

std::vector<GradCase> all_cases() {
  std::vector<GradCase> v;
  for (ModelType t : {ModelType::kRnn, ModelType::kBirnn, ModelType::kHnmc, ModelType::kHnmc2,
                      ModelType::kHnmcCn})
    for (int a : {1, 2, 3}) v.push_back({t, a});
  return v;
}

INSTANTIATE_TEST_SUITE_P(AllKindsAndArchitectures, ModelGradients, ::testing::ValuesIn(all_cases()),
                         [](const auto& info) {
                           std::string name(to_string(info.param.type));
                           for (char& c : name)
                             if (c == '-') c = '_';
                           return name + "_arch" + std::to_string(info.param.arch);
                         });

}  // namespace
}  // namespace hnmc::nn
