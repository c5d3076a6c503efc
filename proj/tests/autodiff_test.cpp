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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "hnmc/autodiff/gradcheck.hpp"
#include "hnmc/autodiff/ops.hpp"
#include "hnmc/autodiff/tape.hpp"
#include "hnmc/errors.hpp"

namespace hnmc::ad {
namespace {

std::vector<double> uniform(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

TEST(Melu, MatchesBothBranches) {
  const Tensor y = melu(Tensor::vector({0.0, 2.0, -1.0}));
  EXPECT_DOUBLE_EQ(y[0], 1.0);
  EXPECT_DOUBLE_EQ(y[1], 3.0);
  EXPECT_NEAR(y[2], 0.36787944117144233, 1e-15);
}

TEST(Melu, StrictlyPositive) {
  std::mt19937_64 rng(3);
  const Tensor y = melu(Tensor::vector(uniform(rng, 1000, -700.0, 50.0)));
  for (double v : y.values()) EXPECT_GT(v, 0.0);
}

TEST(Elementwise, BasicValues) {
  const Tensor s = add(Tensor::vector({1, 2}), Tensor::vector({3, 4}));
  EXPECT_EQ(std::vector<double>(s.values().begin(), s.values().end()), (std::vector<double>{4, 6}));
  const Tensor e = exp(Tensor::vector({0, 0}));
  EXPECT_EQ(e[0], 1.0);
  EXPECT_EQ(e[1], 1.0);
}

TEST(Elementwise, DomainErrors) {
  EXPECT_THROW(div(Tensor::vector({1}), Tensor::vector({0})), DomainError);
  EXPECT_THROW(log(Tensor::vector({1.0, 0.0})), DomainError);
  EXPECT_THROW(log(Tensor::vector({-2.0})), DomainError);
}

TEST(Elementwise, ShapeMismatch) {
  EXPECT_THROW(add(Tensor::vector({1, 2}), Tensor::vector({1, 2, 3})), ShapeError);
  EXPECT_THROW(mul(Tensor::zeros({2, 3}), Tensor::zeros({2})), ShapeError);
}

TEST(Elementwise, BroadcastsOverLeadingDimension) {
  const Tensor m = Tensor::matrix(2, 3, {1, 2, 3, 4, 5, 6});
  const Tensor r = add(m, Tensor::vector({10, 20, 30}));
  EXPECT_EQ(r.at(1, 2), 36.0);
  const Tensor q = div(m, Tensor::scalar(2.0));
  EXPECT_EQ(q.at(0, 1), 1.0);
}

TEST(Matmul, Values) {
  const Tensor eye = Tensor::matrix(2, 2, {1, 0, 0, 1});
  const Tensor m = Tensor::matrix(2, 2, {1, 2, 3, 4});
  const Tensor p = matmul(eye, m);
  EXPECT_EQ(std::vector<double>(p.values().begin(), p.values().end()),
            (std::vector<double>{1, 2, 3, 4}));
  const Tensor q = matmul(Tensor::matrix(1, 2, {1, 2}), Tensor::matrix(2, 1, {3, 4}));
  EXPECT_EQ(q.shape(), (Shape{1, 1}));
  EXPECT_EQ(q.item(), 11.0);
  EXPECT_THROW(matmul(Tensor::zeros({2, 3}), Tensor::zeros({2, 3})), ShapeError);
}

TEST(Matmul, GradientOfSumMatchesFiniteDifferenceValue) {
  // d/da sum(a b) at a=[[1,0]], b=[[2],[5]] is b^T = [[2,5]]; frozen from
  // central differences of the scalar map.
  Tensor a = Tensor::matrix(1, 2, {1, 0}, true);
  Tensor b = Tensor::matrix(2, 1, {2, 5});
  Tape tape;
  tape.backward(sum(matmul(a, b)));
  EXPECT_NEAR(a.grad()[0], 2.0, 1e-12);
  EXPECT_NEAR(a.grad()[1], 5.0, 1e-12);
}

TEST(Softmax, ValuesAndCrossEntropy) {
  const Tensor s = softmax(Tensor::vector({0, 0}));
  EXPECT_DOUBLE_EQ(s[0], 0.5);
  EXPECT_DOUBLE_EQ(s[1], 0.5);
  EXPECT_NEAR(cross_entropy(Tensor::vector({0, 0}), 0).item(), std::log(2.0), 1e-15);
  // -log softmax([10,-10])[1] = 20 + log(1 + e^-20).
  EXPECT_NEAR(cross_entropy(Tensor::vector({10, -10}), 1).item(), 20.0 + std::log1p(std::exp(-20.0)),
              1e-12);
  EXPECT_NEAR(cross_entropy(Tensor::vector({10, -10}), 1).item(), 20.0, 1e-8);
  EXPECT_THROW(cross_entropy(Tensor::vector({0, 0}), 2), std::out_of_range);
}

TEST(Softmax, RowsSumToOneAndShiftInvariant) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Tensor x = Tensor::matrix(4, 5, uniform(rng, 20, -30.0, 30.0));
    const Tensor shift = Tensor::matrix(4, 1, uniform(rng, 4, -100.0, 100.0));
    std::vector<double> shifted(x.values().begin(), x.values().end());
    for (std::size_t r = 0; r < 4; ++r) {
      for (std::size_t c = 0; c < 5; ++c) shifted[r * 5 + c] += shift[r];
    }
    const Tensor s = softmax(x, 1);
    const Tensor s2 = softmax(Tensor::matrix(4, 5, shifted), 1);
    for (std::size_t r = 0; r < 4; ++r) {
      double total = 0.0;
      for (std::size_t c = 0; c < 5; ++c) {
        total += s.at(r, c);
        EXPECT_NEAR(s.at(r, c), s2.at(r, c), 1e-12);
      }
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
  }
}

TEST(Backward, SquareAndMelu) {
  Tensor x = Tensor::scalar(3.0, true);
  {
    Tape tape;
    tape.backward(mul(x, x));
  }
  EXPECT_DOUBLE_EQ(x.grad()[0], 6.0);

  Tensor v = Tensor::vector({-1.0, 2.0}, true);
  {
    Tape tape;
    tape.backward(sum(melu(v)));
  }
  EXPECT_NEAR(v.grad()[0], std::exp(-1.0), 1e-15);
  EXPECT_DOUBLE_EQ(v.grad()[1], 1.0);
}

TEST(Backward, RepeatedCallsAccumulate) {
  Tensor x = Tensor::vector({0.5, -1.5}, true);
  Tape tape;
  const Tensor loss = sum(mul(tanh(x), exp(x)));
  tape.backward(loss);
  const std::vector<double> once(x.grad().begin(), x.grad().end());
  tape.backward(loss);
  EXPECT_DOUBLE_EQ(x.grad()[0], 2 * once[0]);
  EXPECT_DOUBLE_EQ(x.grad()[1], 2 * once[1]);
  x.zero_grad();
  EXPECT_EQ(x.grad()[0], 0.0);
}

TEST(Backward, RejectsNonScalarOrForeignLoss) {
  Tensor x = Tensor::vector({1, 2}, true);
  Tape tape;
  const Tensor y = exp(x);
  EXPECT_THROW(tape.backward(y), ShapeError);
  EXPECT_THROW(tape.backward(Tensor::scalar(1.0)), std::invalid_argument);
}

TEST(Backward, VisitsEveryRecordOnce) {
  Tensor x = Tensor::vector({0.1, 0.2, 0.3}, true);
  Tape tape;
  Tensor y = x;
  constexpr int kOps = 17;
  for (int k = 0; k < kOps - 1; ++k) y = (k % 2 == 0) ? tanh(y) : scale(y, 1.1);
  const Tensor loss = sum(y);
  EXPECT_EQ(tape.size(), static_cast<std::size_t>(kOps));
  tape.backward(loss);
  EXPECT_EQ(tape.last_visit_count(), static_cast<std::size_t>(kOps));
  tape.backward(loss);
  EXPECT_EQ(tape.last_visit_count(), static_cast<std::size_t>(kOps));
}

TEST(Backward, NothingRecordedWithoutTape) {
  Tensor x = Tensor::vector({1, 2}, true);
  const Tensor y = exp(x);
  EXPECT_FALSE(y.requires_grad());
  Tape tape;
  {
    NoGradScope no_grad;
    EXPECT_FALSE(exp(x).requires_grad());
  }
  EXPECT_TRUE(exp(x).requires_grad());
}

// Every differentiable op agrees with central differences (step 1e-6,
// relative error < 1e-6) on random inputs in [-2, 2].
class OpGradient : public ::testing::TestWithParam<int> {};

TEST_P(OpGradient, MatchesFiniteDifferences) {
  std::mt19937_64 rng(1000 + GetParam());
  const GradCheckOptions opts{1e-6, 1e-6};
  auto check = [&](const char* name, auto&& make_loss, std::vector<Tensor> inputs) {
    const GradCheckResult r = check_gradients(make_loss, inputs, opts);
    EXPECT_LT(r.max_relative_error, 1e-6) << name;
  };
  auto weights = Tensor::matrix(3, 4, uniform(rng, 12, 0.5, 1.5));
  auto weighted = [&](const Tensor& t) { return sum(mul(t, weights)); };

  Tensor x = Tensor::matrix(3, 4, uniform(rng, 12, -2, 2), true);
  Tensor y = Tensor::matrix(3, 4, uniform(rng, 12, -2, 2), true);
  Tensor r = Tensor::vector(uniform(rng, 4, -2, 2), true);
  std::vector<double> den = uniform(rng, 12, 0.5, 2.0);
  for (std::size_t k = 0; k < den.size(); k += 2) den[k] = -den[k];
  Tensor d = Tensor::matrix(3, 4, den, true);
  Tensor pos = Tensor::matrix(3, 4, uniform(rng, 12, 0.1, 2.0), true);

  check("add", [&] { return weighted(add(x, y)); }, {x, y});
  check("add-broadcast", [&] { return weighted(add(x, r)); }, {x, r});
  check("sub", [&] { return weighted(sub(x, r)); }, {x, r});
  check("mul", [&] { return weighted(mul(x, y)); }, {x, y});
  check("div", [&] { return weighted(div(x, d)); }, {x, d});
  check("exp", [&] { return weighted(exp(x)); }, {x});
  check("log", [&] { return weighted(log(pos)); }, {pos});
  check("sigmoid", [&] { return weighted(sigmoid(x)); }, {x});
  check("tanh", [&] { return weighted(tanh(x)); }, {x});
  check("melu", [&] { return weighted(melu(x)); }, {x});
  check("normalize", [&] { return weighted(normalize(pos)); }, {pos});
  check("softmax", [&] { return weighted(softmax(x, 1)); }, {x});
  check("softmax-axis0", [&] { return weighted(softmax(x, 0)); }, {x});
  check("log_softmax", [&] { return weighted(log_softmax(x, 1)); }, {x});
  check("transpose", [&] { return weighted(transpose(transpose(x))); }, {x});
  check("sum-axis", [&] { return sum(mul(sum(x, 0), r)); }, {x, r});
  check("sum-axis1", [&] { return sum(mul(sum(x, 1), sum(y, 1))); }, {x, y});
  Tensor w = Tensor::matrix(4, 2, uniform(rng, 8, -2, 2), true);
  check("matmul", [&] { return sum(tanh(scale(matmul(x, w), 0.2))); }, {x, w});
  check("matvec", [&] { return sum(tanh(scale(matmul(x, r), 0.2))); }, {x, r});
  Tensor v3 = Tensor::vector(uniform(rng, 3, -2, 2), true);
  check("vecmat", [&] { return sum(tanh(scale(matmul(v3, x), 0.2))); }, {v3, x});
  check("row/stack", [&] { return weighted(stack({row(x, 2), row(y, 0), row(x, 1)})); }, {x, y});
  check("concat", [&] { return sum(exp(concat_columns(x, y))); }, {x, y});
  check("reshape", [&] { return sum(mul(reshape(x, {4, 3}), reshape(weights, {4, 3}))); }, {x});
  const std::vector<int> targets{1, 3, 0};
  check("cross_entropy", [&] { return cross_entropy_sum(x, targets); }, {x});
}

INSTANTIATE_TEST_SUITE_P(Seeds, OpGradient, ::testing::Range(0, 5));

}  // namespace
}  // namespace hnmc::ad
