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
#include <sstream>
#include <string>
#include <vector>

#include "hnmc/data/synthetic.hpp"
#include "hnmc/errors.hpp"
#include "hnmc/nn/table_embedding.hpp"
#include "hnmc/train/checkpoint.hpp"
#include "hnmc/train/optimizer.hpp"
#include "hnmc/train/trainer.hpp"

namespace hnmc::train {
namespace {

using ad::Tensor;
using nn::ArchitectureSpec;
using nn::LabeledModel;
using nn::ModelType;

// Label sequences double as one-hot token sequences over `n` symbols.
data::SequenceBatch batch_from(const std::vector<std::vector<int>>& tokens,
                               const std::vector<std::vector<int>>& labels, std::size_t n) {
  data::SequenceBatch b;
  for (std::size_t s = 0; s < tokens.size(); ++s) {
    b.inputs.push_back(nn::one_hot_sequence(tokens[s], n));
    b.labels.push_back(labels[s]);
  }
  return b;
}

ArchitectureSpec spec(ModelType type, int arch, std::size_t labels, std::size_t dim,
                      std::size_t hidden = 4) {
  ArchitectureSpec s;
  s.type = type;
  s.arch = arch;
  s.hidden_size = hidden;
  s.n_labels = labels;
  s.embedding_dim = dim;
  return s;
}

std::vector<std::vector<double>> snapshot(const LabeledModel& m) {
  std::vector<std::vector<double>> out;
  for (const auto& p : m.parameters()) out.emplace_back(p.tensor.values().begin(), p.tensor.values().end());
  return out;
}

std::string bytes_of(const Checkpoint& c) {
  std::ostringstream os;
  save_checkpoint(os, c);
  return os.str();
}

struct Synth {
  data::SequenceBatch train, dev;
  std::vector<std::string> labels;
  std::size_t dim = 0;
};

Synth synth(data::SynthKind kind, std::uint64_t seed, std::size_t n_train, std::size_t n_dev) {
  auto tr = data::synth_corpus(kind, seed, n_train);
  auto dv = data::synth_corpus(kind, seed + 1000, n_dev);
  Synth s;
  s.train = data::embed(tr.corpus, tr.embeddings);
  s.dev = data::embed(dv.corpus, tr.embeddings);
  s.labels = tr.corpus.labels.names();
  s.dim = tr.embeddings.dim();
  return s;
}

TEST(Optimizer, SgdStepMatchesUpdateRule) {
  std::vector<double> theta{1.0};
  const std::vector<double> g{0.5};
  sgd_step(theta, g, 0.1);
  EXPECT_DOUBLE_EQ(theta[0], 0.95);
}

TEST(Optimizer, AdamZeroGradientOnlyAdvancesTime) {
  std::vector<double> theta{1.0, -2.0, 3.5};
  const std::vector<double> g(3, 0.0);
  AdamState st;
  adam_step(theta, g, st, 0.01);
  EXPECT_EQ(st.t, 1u);
  EXPECT_EQ(theta, (std::vector<double>{1.0, -2.0, 3.5}));
  adam_step(theta, g, st, 0.01);
  EXPECT_EQ(st.t, 2u);
}

TEST(Optimizer, AdamFirstStepMovesByLearningRate) {
  // At t = 1, m_hat = g and v_hat = g^2, so the step is lr * g / (|g| + eps).
  for (double g : {1e-3, 0.5, -2.0, 40.0}) {
    std::vector<double> theta{0.0};
    const std::vector<double> grad{g};
    AdamState st;
    adam_step(theta, grad, st, 0.005);
    EXPECT_NEAR(theta[0], -0.005 * g / (std::abs(g) + 1e-8), 1e-15);
    EXPECT_NEAR(std::abs(theta[0]), 0.005, 1e-7);
  }
}

TEST(Optimizer, AdamSecondStepClosedForm) {
  std::vector<double> theta{0.0};
  AdamState st;
  const double g1 = 0.3, g2 = -0.1, lr = 0.01;
  adam_step(theta, std::vector<double>{g1}, st, lr);
  adam_step(theta, std::vector<double>{g2}, st, lr);
  const double m = (0.9 * 0.1 * g1 + 0.1 * g2) / (1 - 0.81);
  const double v = (0.999 * 0.001 * g1 * g1 + 0.001 * g2 * g2) / (1 - 0.999 * 0.999);
  const double want = -lr * g1 / (g1 + 1e-8) - lr * m / (std::sqrt(v) + 1e-8);
  EXPECT_NEAR(theta[0], want, 1e-15);
}

TEST(Optimizer, ShapeMismatchThrows) {
  std::vector<double> theta(3, 0.0);
  AdamState st;
  EXPECT_THROW(adam_step(theta, std::vector<double>(2, 0.0), st, 0.1), ShapeError);
  adam_step(theta, std::vector<double>(3, 0.0), st, 0.1);
  std::vector<double> other(4, 0.0);
  EXPECT_THROW(adam_step(other, std::vector<double>(4, 0.0), st, 0.1), ShapeError);
  EXPECT_THROW(sgd_step(theta, std::vector<double>(1, 0.0), 0.1), ShapeError);
}

TEST(Optimizer, ClipRescalesJointNorm) {
  Tensor a = Tensor::vector({0.0, 0.0}, true);
  Tensor b = Tensor::vector({0.0}, true);
  a.mutable_grad()[0] = 3.0;
  b.mutable_grad()[0] = 4.0;
  Optimizer opt(OptimizerKind::kSgd, {{{a}, 1.0}, {{b}, 1.0}});
  EXPECT_DOUBLE_EQ(opt.clip_grad_norm(1.0), 5.0);
  EXPECT_NEAR(opt.grad_norm(), 1.0, 1e-15);
  EXPECT_NEAR(a.grad()[0], 0.6, 1e-15);
  EXPECT_THROW(Optimizer(OptimizerKind::kSgd, {{{a}, -0.1}}), ParameterError);
}

TEST(TrainConfig, LayerRatesMustMatchGroups) {
  TrainConfig c;
  c.lr_layers = {0.05};
  EXPECT_THROW(validate(c, 2), ParameterError);
  EXPECT_NO_THROW(validate(c, 1));
  c.lr_layers = {0.05, 0.005};
  EXPECT_EQ(group_learning_rates(c, 2), (std::vector<double>{0.05, 0.005}));
  EXPECT_EQ(group_learning_rates(c, 1), (std::vector<double>{0.005}));
  c.batch_size = 0;
  EXPECT_THROW(validate(c, 1), ParameterError);
  c.batch_size = 1;
  c.lr_model = std::nan("");
  EXPECT_THROW(validate(c, 1), ParameterError);
}

TEST(TrainConfig, JsonRoundTrip) {
  TrainConfig c;
  c.seed = 77;
  c.optimizer = OptimizerKind::kSgd;
  c.metric = MetricKind::kSpanF1;
  c.clip_norm = 5.0;
  c.lr_layers = {0.1, 0.2};
  EXPECT_EQ(to_json(train_config_from_json(to_json(c))), to_json(c));
  ArchitectureSpec s = spec(ModelType::kHnmcCn, 3, 5, 7, 6);
  s.kernel.hidden = {3};
  s.kernel.output_activation = nn::Activation::kExp;
  EXPECT_EQ(to_json(architecture_from_json(to_json(s))), to_json(s));
  EXPECT_THROW(train_config_from_json(nlohmann::json{{"epochs", 3}}), FormatError);
}

TEST(Evaluate, PerfectPredictionsScoreOne) {
  // RNN arch 1 whose state is tanh(5 * onehot): predicts label = token.
  LabeledModel m(spec(ModelType::kRnn, 1, 4, 4), 1);
  for (auto& p : m.parameters()) {
    auto v = p.tensor.mutable_values();
    std::fill(v.begin(), v.end(), 0.0);
    if (p.name == "layer0.w_in") for (std::size_t k = 0; k < 4; ++k) v[k * 4 + k] = 5.0;
  }
  const std::vector<std::vector<int>> seqs{{0, 1, 2, 3}, {3, 3, 1}};
  const auto ds = batch_from(seqs, seqs, 4);
  const std::vector<std::string> names{"O", "B-X", "I-X", "B-Y"};
  EXPECT_DOUBLE_EQ(evaluate(m, ds, MetricKind::kAccuracy), 1.0);
  EXPECT_DOUBLE_EQ(evaluate(m, ds, MetricKind::kSpanF1, names), 1.0);

  // Mixed: gold O B-X B-X B-Y vs predicted O B-X I-X B-Y.
  const auto mixed = batch_from({{0, 1, 2, 3}}, {{0, 1, 1, 3}}, 4);
  EXPECT_DOUBLE_EQ(evaluate(m, mixed, MetricKind::kAccuracy), 0.75);
  EXPECT_NEAR(evaluate(m, mixed, MetricKind::kSpanF1, names), 0.4, 1e-15);
  EXPECT_THROW(evaluate(m, mixed, MetricKind::kSpanF1), ParameterError);
}

TEST(Evaluate, ConstantPredictorOnBalancedLabels) {
  // All-zero weights tie every score; the first label wins.
  LabeledModel m(spec(ModelType::kRnn, 1, 4, 4), 2);
  for (auto& p : m.parameters()) {
    auto v = p.tensor.mutable_values();
    std::fill(v.begin(), v.end(), 0.0);
  }
  const auto ds = batch_from({{0, 1, 2, 3}, {3, 2, 1, 0}}, {{0, 1, 2, 3}, {3, 2, 1, 0}}, 4);
  EXPECT_EQ(predict(m, ds.inputs[0]), (std::vector<int>{0, 0, 0, 0}));
  EXPECT_DOUBLE_EQ(evaluate(m, ds, MetricKind::kAccuracy), 0.25);
}

TEST(Evaluate, EmptyDatasetThrows) {
  LabeledModel m(spec(ModelType::kHnmc, 1, 2, 3), 1);
  EXPECT_THROW(evaluate(m, data::SequenceBatch{}, MetricKind::kAccuracy), ShapeError);
}

TEST(Train, RejectsBadData) {
  LabeledModel m(spec(ModelType::kHnmc, 1, 2, 3), 1);
  TrainConfig c;
  EXPECT_THROW(train(m, data::SequenceBatch{}, nullptr, c), ShapeError);
  EXPECT_THROW(train(m, batch_from({{0, 1}}, {{0, 2}}, 3), nullptr, c), ParameterError);
  EXPECT_THROW(train(m, batch_from({{0, 1}}, {{0, 1}}, 4), nullptr, c), ShapeError);
}

TEST(Train, OverfitsSingleSequence) {
  const std::vector<std::vector<int>> tokens{{0, 1, 2, 1, 0, 2, 2, 1}};
  const std::vector<std::vector<int>> labels{{1, 0, 2, 0, 1, 2, 2, 0}};
  const auto ds = batch_from(tokens, labels, 3);
  for (auto type : {ModelType::kRnn, ModelType::kHnmc, ModelType::kHnmcCn}) {
    LabeledModel m(spec(type, 1, 3, 3), 4);
    TrainConfig c;
    c.epochs = 200;
    train(m, ds, nullptr, c);
    EXPECT_DOUBLE_EQ(evaluate(m, ds, MetricKind::kAccuracy), 1.0) << nn::to_string(type);
  }
}

TEST(Train, ZeroLearningRateKeepsLossConstant) {
  const auto d = synth(data::SynthKind::kHmmSampled, 3, 40, 10);
  LabeledModel m(spec(ModelType::kHnmc, 1, d.labels.size(), d.dim), 3);
  const auto before = snapshot(m);
  TrainConfig c;
  c.epochs = 4;
  c.lr_model = 0.0;
  c.batch_size = 7;
  const auto r = train(m, d.train, &d.dev, c);
  for (const auto& e : r.log) EXPECT_EQ(e.mean_loss, r.log[0].mean_loss);
  EXPECT_EQ(snapshot(m), before);
  EXPECT_NEAR(r.log[0].mean_loss, mean_loss(m, d.train), 1e-12);
}

TEST(Train, FrozenGroupStaysBitIdentical) {
  const auto d = synth(data::SynthKind::kHmmSampled, 4, 30, 5);
  for (auto type : {ModelType::kHnmc, ModelType::kBirnn}) {
    for (int arch : {2, 3}) {
      LabeledModel m(spec(type, arch, d.labels.size(), d.dim), 5);
      const auto before = m.parameter_groups();
      std::vector<std::vector<double>> g0, g1;
      for (const auto& p : before[0].params) g0.emplace_back(p.tensor.values().begin(), p.tensor.values().end());
      for (const auto& p : before[1].params) g1.emplace_back(p.tensor.values().begin(), p.tensor.values().end());
      TrainConfig c;
      c.epochs = 2;
      c.lr_layers = {0.0, 0.05};
      train(m, d.train, nullptr, c);
      const auto after = m.parameter_groups();
      for (std::size_t k = 0; k < g0.size(); ++k) {
        const auto v = after[0].params[k].tensor.values();
        EXPECT_TRUE(std::equal(v.begin(), v.end(), g0[k].begin())) << after[0].params[k].name;
      }
      bool moved = false;
      for (std::size_t k = 0; k < g1.size(); ++k) {
        const auto v = after[1].params[k].tensor.values();
        moved |= !std::equal(v.begin(), v.end(), g1[k].begin());
      }
      EXPECT_TRUE(moved);
    }
  }
}

TEST(Train, SameSeedSameRun) {
  const auto d = synth(data::SynthKind::kHmmSampled, 6, 60, 20);
  for (auto type : {ModelType::kBirnn, ModelType::kHnmc2}) {
    std::vector<std::string> bytes;
    std::vector<std::vector<double>> curves;
    for (int run = 0; run < 2; ++run) {
      LabeledModel m(spec(type, 2, d.labels.size(), d.dim), 9);
      TrainConfig c;
      c.epochs = 3;
      c.seed = 9;
      const auto r = train(m, d.train, &d.dev, c, {}, nlohmann::json{{"run", "x"}});
      bytes.push_back(bytes_of(r.best));
      auto& curve = curves.emplace_back();
      for (const auto& e : r.log) curve.push_back(e.mean_loss);
    }
    EXPECT_EQ(bytes[0], bytes[1]);
    EXPECT_EQ(curves[0], curves[1]);
  }
}

TEST(Train, ReturnsBestDevEpochAndRestoresIt) {
  const auto d = synth(data::SynthKind::kHmmSampled, 8, 60, 30);
  LabeledModel m(spec(ModelType::kHnmc, 1, d.labels.size(), d.dim), 8);
  TrainConfig c;
  c.epochs = 6;
  const auto r = train(m, d.train, &d.dev, c);
  ASSERT_EQ(r.log.size(), 6u);
  double best = -1.0;
  std::size_t best_epoch = 0;
  for (const auto& e : r.log) {
    if (*e.dev_score > best) best = *e.dev_score, best_epoch = e.epoch;
  }
  EXPECT_EQ(r.best_epoch, best_epoch);
  EXPECT_EQ(r.best.epoch, best_epoch);
  EXPECT_DOUBLE_EQ(evaluate(m, d.dev, MetricKind::kAccuracy), best);
}

TEST(Train, LossFallsByEpochFive) {
  for (auto type : {ModelType::kRnn, ModelType::kBirnn, ModelType::kHnmc, ModelType::kHnmc2,
                    ModelType::kHnmcCn}) {
    int wins = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const auto d = synth(data::SynthKind::kHmmSampled, seed, 150, 10);
      LabeledModel m(spec(type, 1, d.labels.size(), d.dim), seed);
      TrainConfig c;
      c.epochs = 5;
      c.seed = seed;
      const auto r = train(m, d.train, nullptr, c);
      wins += r.log[4].mean_loss < r.log[0].mean_loss;
    }
    EXPECT_GE(wins, 4) << nn::to_string(type);
  }
}

TEST(Train, NonFiniteInputAbortsWithDiagnostics) {
  auto ds = batch_from({{0, 1, 2}}, {{0, 1, 0}}, 3);
  ds.inputs[0].mutable_values()[4] = std::nan("");
  LabeledModel m(spec(ModelType::kHnmc, 1, 2, 3), 1);
  try {
    train(m, ds, nullptr, TrainConfig{});
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("epoch 1"), std::string::npos) << what;
    EXPECT_NE(what.find("batch 0"), std::string::npos) << what;
    EXPECT_NE(what.find("layer0="), std::string::npos) << what;
  }
}

TEST(Checkpoint, RoundTripIsBitIdentical) {
  for (auto type : {ModelType::kRnn, ModelType::kHnmcCn}) {
    LabeledModel m(spec(type, 3, 3, 4), 21);
    const auto c = capture(m, nlohmann::json{{"k", 1.5}}, 7, "rng-state");
    std::stringstream ss;
    save_checkpoint(ss, c);
    const auto back = load_checkpoint(ss);
    EXPECT_EQ(back.config, c.config);
    EXPECT_EQ(back.epoch, 7u);
    EXPECT_EQ(back.rng_state, "rng-state");
    EXPECT_EQ(bytes_of(back), bytes_of(c));

    LabeledModel fresh(spec(type, 3, 3, 4), 99);
    restore(fresh, back);
    const Tensor x = nn::one_hot_sequence(std::vector<int>{0, 3, 1, 2, 2}, 4);
    const Tensor a = m.logits(x);
    const Tensor b = fresh.logits(x);
    EXPECT_TRUE(std::equal(a.values().begin(), a.values().end(), b.values().begin()));
  }
}

TEST(Checkpoint, HeaderLayout) {
  LabeledModel m(spec(ModelType::kHnmc, 1, 2, 2), 1);
  const std::string b = bytes_of(capture(m, nlohmann::json::object(), 3, "r"));
  EXPECT_EQ(b.substr(0, 8), "HNMCCKPT");
  EXPECT_EQ(b.substr(8, 4), std::string("\x01\x00\x00\x00", 4));
  // config "{}" preceded by its u64 length
  EXPECT_EQ(b.substr(12, 10), std::string("\x02\0\0\0\0\0\0\0{}", 10));
}

TEST(Checkpoint, CorruptInputIsRejected) {
  LabeledModel m(spec(ModelType::kHnmc, 1, 2, 2), 1);
  const std::string good = bytes_of(capture(m, {}, 1, ""));
  auto load = [](std::string s) {
    std::istringstream in(s);
    return load_checkpoint(in);
  };
  EXPECT_NO_THROW(load(good));
  EXPECT_THROW(load("NOTACKPT" + good.substr(8)), FormatError);
  EXPECT_THROW(load(good.substr(0, good.size() - 3)), FormatError);
  std::string v2 = good;
  v2[8] = 2;
  EXPECT_THROW(load(v2), FormatError);
}

TEST(Checkpoint, RestoreChecksNamesAndShapes) {
  LabeledModel a(spec(ModelType::kHnmc, 1, 2, 3), 1);
  LabeledModel wider(spec(ModelType::kHnmc, 1, 2, 4), 1);
  LabeledModel rnn(spec(ModelType::kRnn, 1, 2, 3), 1);
  const auto c = capture(a, {}, 1, "");
  EXPECT_THROW(restore(wider, c), FormatError);
  EXPECT_THROW(restore(rnn, c), FormatError);
}

}  // namespace
}  // namespace hnmc::train
