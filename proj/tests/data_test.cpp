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

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "hnmc/data/corpus.hpp"
#include "hnmc/data/embeddings.hpp"
#include "hnmc/data/synthetic.hpp"
#include "hnmc/errors.hpp"
#include "hnmc/metrics/metrics.hpp"
#include "hnmc/prob/forward_backward.hpp"

namespace hnmc::data {
namespace {

Corpus parse(const std::string& text, const ConllOptions& opt = {}, const LabelMap* labels = nullptr) {
  std::istringstream in(text);
  return parse_conll(in, opt, labels);
}

// ---- CoNLL ----

TEST(Conll, TwoLineSentence) {
  const Corpus c = parse("Batman NOUN\nis VERB\n\n");
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c.sentences[0].tokens, (std::vector<std::string>{"Batman", "is"}));
  EXPECT_EQ(c.sentences[0].labels, (std::vector<int>{0, 1}));
  EXPECT_EQ(c.labels.name(0), "NOUN");
  EXPECT_EQ(c.labels.name(1), "VERB");
}

TEST(Conll, OnlyBlankLinesIsAnError) { EXPECT_THROW(parse("\n\n  \n"), FormatError); }

TEST(Conll, MissingLabelColumnIsAnError) {
  ConllOptions opt;
  opt.label_column = 2;
  EXPECT_THROW(parse("Batman NOUN\nis VERB\n", opt), FormatError);
  EXPECT_THROW(parse("Batman NN B-NP\nis VBZ\n"), FormatError);
}

TEST(Conll, MultiColumnDocstartAndCrlf) {
  const Corpus c = parse("-DOCSTART- -X- O\n\nEU NNP B-ORG\r\nrejects VBZ O\n\n\nGerman JJ B-MISC\n");
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.labels.names(), (std::vector<std::string>{"B-ORG", "O", "B-MISC"}));
  EXPECT_EQ(c.sentences[1].tokens[0], "German");
  ConllOptions pos;
  pos.label_column = 1;
  EXPECT_EQ(parse("EU NNP B-ORG\n", pos).labels.name(0), "NNP");
}

TEST(Conll, FrozenLabelMapRejectsUnseenLabels) {
  const Corpus train = parse("a X\nb Y\n");
  EXPECT_NO_THROW(parse("c Y\n", {}, &train.labels));
  EXPECT_THROW(parse("c Z\n", {}, &train.labels), FormatError);
  EXPECT_EQ(parse("c Y\n", {}, &train.labels).sentences[0].labels[0], 1);
}

TEST(Conll, WriteThenReadIsIdentity) {
  const SyntheticData d = synth_corpus(SynthKind::kHmmSampled, 4, 50);
  std::stringstream buf;
  write_conll(buf, d.corpus);
  const Corpus back = parse_conll(buf, {}, &d.corpus.labels);
  ASSERT_EQ(back.size(), d.corpus.size());
  for (std::size_t s = 0; s < back.size(); ++s) {
    EXPECT_EQ(back.sentences[s].tokens, d.corpus.sentences[s].tokens);
    EXPECT_EQ(back.sentences[s].labels, d.corpus.sentences[s].labels);
  }
}

TEST(Conll, FilesRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "hnmc_conll_roundtrip.txt";
  const Corpus c = parse("Batman NOUN\nis VERB\n\nhere ADV\n");
  write_conll(path.string(), c);
  const Corpus back = read_conll(path.string());
  EXPECT_EQ(back.labels.names(), c.labels.names());
  EXPECT_EQ(back.sentences[1].tokens[0], "here");
  std::filesystem::remove(path);
  EXPECT_THROW(read_conll(path.string()), FormatError);
}

// ---- embeddings ----

EmbeddingTable parse_emb(const std::string& text, bool lower = false) {
  std::istringstream in(text);
  return parse_embeddings(in, lower);
}

TEST(Embeddings, LookupReturnsStoredVectors) {
  const EmbeddingTable t = parse_emb("cat 1 2 3\ndog -0.5 0 1e-2\n");
  EXPECT_EQ(t.dim(), 3u);
  const auto v = t.lookup("dog");
  EXPECT_EQ(std::vector<double>(v.begin(), v.end()), (std::vector<double>{-0.5, 0.0, 0.01}));
  EXPECT_EQ(t.lookup("cat")[2], 3.0);
}

TEST(Embeddings, UnknownWordGetsZeroVector) {
  const EmbeddingTable t = parse_emb("cat 1 2 3\n");
  const auto v = t.lookup("platypus");
  ASSERT_EQ(v.size(), 3u);
  for (double x : v) EXPECT_EQ(x, 0.0);
  EXPECT_FALSE(t.contains("platypus"));
}

TEST(Embeddings, MixedDimensionsAreAnError) {
  EXPECT_THROW(parse_emb("cat 1 2 3\ndog 1 2\n"), FormatError);
  EXPECT_THROW(parse_emb("cat 1 x 3\n"), FormatError);
  EXPECT_THROW(parse_emb("\n"), FormatError);
}

TEST(Embeddings, HeaderLineAndLowercase) {
  const EmbeddingTable t = parse_emb("2 2\nParis 1 0\nrome 0 1\n", true);
  EXPECT_EQ(t.size(), 2u);
  EXPECT_EQ(t.lookup("PARIS")[0], 1.0);
  EXPECT_EQ(t.lookup("Rome")[1], 1.0);
  const EmbeddingTable cased = parse_emb("Paris 1 0\n");
  EXPECT_EQ(cased.lookup("paris")[0], 0.0);
}

TEST(Embeddings, EmbedBuildsOneRowPerToken) {
  const EmbeddingTable t = EmbeddingTable::one_hot({"a", "b", "c"});
  const ad::Tensor x = embed_tokens({"c", "zzz", "a"}, t);
  EXPECT_EQ(x.shape(), (ad::Shape{3, 3}));
  EXPECT_EQ(std::vector<double>(x.values().begin(), x.values().end()),
            (std::vector<double>{0, 0, 1, 0, 0, 0, 1, 0, 0}));
}

// ---- synthetic ----

TEST(Synthetic, FixedSeedGivesIdenticalCorpora) {
  for (SynthKind k : {SynthKind::kHmmSampled, SynthKind::kLookahead}) {
    const SyntheticData a = synth_corpus(k, 12, 30), b = synth_corpus(k, 12, 30);
    const SyntheticData c = synth_corpus(k, 13, 30);
    bool differs = false;
    for (std::size_t s = 0; s < 30; ++s) {
      EXPECT_EQ(a.corpus.sentences[s].tokens, b.corpus.sentences[s].tokens);
      EXPECT_EQ(a.corpus.sentences[s].labels, b.corpus.sentences[s].labels);
      differs |= a.corpus.sentences[s].tokens != c.corpus.sentences[s].tokens;
    }
    EXPECT_TRUE(differs);
  }
}

TEST(Synthetic, LengthsAndLabelsAreInRange) {
  const SyntheticData d = synth_corpus(SynthKind::kHmmSampled, 1, 200);
  EXPECT_EQ(d.corpus.labels.size(), 4u);
  EXPECT_EQ(d.embeddings.dim(), 8u);
  for (const auto& s : d.corpus.sentences) {
    EXPECT_GE(s.tokens.size(), 4u);
    EXPECT_LE(s.tokens.size(), 10u);
    for (int l : s.labels) EXPECT_LT(static_cast<std::size_t>(l), 4u);
  }
  EXPECT_THROW(synth_corpus(SynthKind::kLookahead, 1, 0), ParameterError);
}

TEST(Synthetic, DeterministicEmissionsAreFullyRecoverable) {
  SynthOptions o;
  o.emission_noise = 0.0;
  const SyntheticData d = synth_corpus(SynthKind::kHmmSampled, 3, 100, o);
  std::vector<std::vector<int>> pred, gold;
  for (const auto& s : d.corpus.sentences) {
    std::vector<int> obs;
    for (const auto& tok : s.tokens) obs.push_back(std::stoi(tok.substr(1)));
    const prob::PosteriorMatrix p = prob::classic_fb(*d.params, obs);
    std::vector<int> mpm;
    for (Eigen::Index t = 0; t < p.values.rows(); ++t) {
      Eigen::Index arg;
      p.values.row(t).maxCoeff(&arg);
      mpm.push_back(static_cast<int>(arg));
    }
    pred.push_back(mpm);
    gold.push_back(s.labels);
  }
  EXPECT_EQ(metrics::token_accuracy(pred, gold), 1.0);
}

TEST(Synthetic, TransitionFrequenciesConvergeToGenerator) {
  const SyntheticData d = synth_corpus(SynthKind::kHmmSampled, 21, 10000);
  prob::Matrix counts = prob::Matrix::Zero(4, 4);
  for (const auto& s : d.corpus.sentences)
    for (std::size_t t = 1; t < s.labels.size(); ++t) counts(s.labels[t - 1], s.labels[t]) += 1;
  for (int i = 0; i < 4; ++i) counts.row(i) /= counts.row(i).sum();
  EXPECT_LT((counts - d.params->a).cwiseAbs().maxCoeff(), 0.05);
}

TEST(Synthetic, LookaheadLabelsFollowNextToken) {
  const SyntheticData d = synth_corpus(SynthKind::kLookahead, 5, 100);
  for (const auto& s : d.corpus.sentences) {
    const std::size_t T = s.tokens.size();
    for (std::size_t t = 0; t < T; ++t) {
      const int next = std::stoi(s.tokens[t + 1 < T ? t + 1 : t].substr(1));
      EXPECT_EQ(d.corpus.labels.name(s.labels[t]), "C" + std::to_string(next % 2));
    }
  }
}

TEST(Synthetic, LookaheadLabelsAreIndependentOfThePast) {
  // Best causal predictor from (y_{t-1}, y_t) stays at chance before the
  // last position.
  const SyntheticData d = synth_corpus(SynthKind::kLookahead, 6, 20000);
  std::vector<std::array<double, 2>> counts(16, {0.0, 0.0});
  for (const auto& s : d.corpus.sentences) {
    for (std::size_t t = 1; t + 1 < s.tokens.size(); ++t) {
      const int key = std::stoi(s.tokens[t - 1].substr(1)) * 4 + std::stoi(s.tokens[t].substr(1));
      counts[static_cast<std::size_t>(key)][static_cast<std::size_t>(s.labels[t])] += 1;
    }
  }
  double best = 0, total = 0;
  for (const auto& c : counts) {
    best += std::max(c[0], c[1]);
    total += c[0] + c[1];
  }
  EXPECT_LT(best / total, 0.52);
}

}  // namespace
}  // namespace hnmc::data
