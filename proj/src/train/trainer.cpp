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

#include "hnmc/train/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "hnmc/autodiff/ops.hpp"
#include "hnmc/autodiff/tape.hpp"
#include "hnmc/errors.hpp"
#include "hnmc/metrics/metrics.hpp"

namespace hnmc::train {

namespace {

void check_dataset(const nn::LabeledModel& model, const data::SequenceBatch& ds,
                   const char* what) {
  if (ds.inputs.size() != ds.labels.size()) {
    throw ShapeError(std::string(what) + ": inputs and labels differ in count");
  }
  const auto& spec = model.spec();
  for (std::size_t s = 0; s < ds.size(); ++s) {
    const auto& x = ds.inputs[s];
    if (x.rank() != 2 || x.dim(1) != spec.embedding_dim || x.dim(0) != ds.labels[s].size()) {
      throw ShapeError(std::string(what) + ": sequence " + std::to_string(s) + " has shape " +
                       ad::shape_to_string(x.shape()) + " for " +
                       std::to_string(ds.labels[s].size()) + " labels, model expects width " +
                       std::to_string(spec.embedding_dim));
    }
    for (int y : ds.labels[s]) {
      if (y < 0 || static_cast<std::size_t>(y) >= spec.n_labels) {
        throw ParameterError(std::string(what) + ": label index " + std::to_string(y) +
                             " outside the model's " + std::to_string(spec.n_labels) +
                             " labels");
      }
    }
  }
}

std::string norms_report(const std::vector<nn::ParameterGroup>& groups) {
  std::ostringstream os;
  os << "parameter norms:";
  for (const auto& g : groups) {
    double sq = 0.0;
    for (const auto& p : g.params) {
      for (double v : p.tensor.values()) sq += v * v;
    }
    os << ' ' << g.name << '=' << std::sqrt(sq);
  }
  return os.str();
}

[[noreturn]] void numerical_failure(std::size_t epoch, std::size_t batch, const std::string& why,
                                    const std::vector<nn::ParameterGroup>& groups) {
  throw NumericalError("training diverged at epoch " + std::to_string(epoch) + ", batch " +
                       std::to_string(batch) + ": " + why + "; " + norms_report(groups));
}

std::string rng_string(const std::mt19937_64& rng) {
  std::ostringstream os;
  os << rng;
  return os.str();
}

std::vector<std::vector<std::string>> to_names(const std::vector<std::vector<int>>& seqs,
                                               const std::vector<std::string>& names) {
  std::vector<std::vector<std::string>> out;
  out.reserve(seqs.size());
  for (const auto& s : seqs) {
    auto& row = out.emplace_back();
    for (int y : s) row.push_back(names.at(static_cast<std::size_t>(y)));
  }
  return out;
}

}  // namespace

std::vector<int> predict(const nn::LabeledModel& model, const ad::Tensor& inputs) {
  ad::NoGradScope no_grad;
  const ad::Tensor logits = model.logits(inputs);
  const std::size_t T = logits.dim(0), L = logits.dim(1);
  const auto v = logits.values();
  std::vector<int> out(T);
  for (std::size_t t = 0; t < T; ++t) {
    const auto row = v.subspan(t * L, L);
    // max_element returns the first maximum.
    out[t] = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
  }
  return out;
}

double evaluate(const nn::LabeledModel& model, const data::SequenceBatch& dataset,
                MetricKind metric, const std::vector<std::string>& label_names) {
  if (dataset.size() == 0) throw ShapeError("evaluate: empty dataset");
  check_dataset(model, dataset, "evaluate");
  std::vector<std::vector<int>> pred;
  pred.reserve(dataset.size());
  for (const auto& x : dataset.inputs) pred.push_back(predict(model, x));
  if (metric == MetricKind::kAccuracy) return metrics::token_accuracy(pred, dataset.labels);
  if (label_names.size() < model.spec().n_labels) {
    throw ParameterError("span F1 needs the label names");
  }
  return metrics::span_f1(to_names(pred, label_names), to_names(dataset.labels, label_names)).f1;
}

double mean_loss(const nn::LabeledModel& model, const data::SequenceBatch& dataset) {
  if (dataset.size() == 0) throw ShapeError("mean_loss: empty dataset");
  check_dataset(model, dataset, "mean_loss");
  ad::NoGradScope no_grad;
  double total = 0.0;
  std::size_t tokens = 0;
  for (std::size_t s = 0; s < dataset.size(); ++s) {
    total += ad::cross_entropy_sum(model.logits(dataset.inputs[s]), dataset.labels[s]).item();
    tokens += dataset.labels[s].size();
  }
  return total / static_cast<double>(tokens);
}

TrainResult train(nn::LabeledModel& model, const data::SequenceBatch& train_set,
                  const data::SequenceBatch* dev_set, const TrainConfig& config,
                  const std::vector<std::string>& label_names, const nlohmann::json& echo,
                  const TrainHooks& hooks) {
  if (train_set.size() == 0) throw ShapeError("train: empty training set");
  check_dataset(model, train_set, "train");
  const bool use_dev = dev_set != nullptr && dev_set->size() > 0;
  if (use_dev) check_dataset(model, *dev_set, "dev");

  const auto groups = model.parameter_groups();
  const auto lrs = group_learning_rates(config, groups.size());
  std::vector<ParamGroup> opt_groups;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    ParamGroup pg{{}, lrs[g]};
    for (const auto& p : groups[g].params) pg.params.push_back(p.tensor);
    opt_groups.push_back(std::move(pg));
  }
  Optimizer opt(config.optimizer, std::move(opt_groups), config.adam);

  std::mt19937_64 rng(config.seed);
  std::size_t n_tokens = 0;
  for (const auto& y : train_set.labels) n_tokens += y.size();
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});

  TrainResult result;
  for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    if (config.shuffle) std::shuffle(order.begin(), order.end(), rng);
    // Per-sequence losses, summed in corpus order so the epoch mean does not
    // depend on the shuffle.
    std::vector<double> seq_loss(train_set.size(), 0.0);
    std::size_t batch = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size, ++batch) {
      const std::size_t stop = std::min(order.size(), start + config.batch_size);
      opt.zero_grad();
      std::size_t batch_tokens = 0;
      for (std::size_t k = start; k < stop; ++k) {
        const std::size_t s = order[k];
        double value = 0.0;
        try {
          ad::Tape tape;
          const ad::Tensor loss =
              ad::cross_entropy_sum(model.logits(train_set.inputs[s]), train_set.labels[s]);
          value = loss.item();
          if (std::isfinite(value)) tape.backward(loss);
        } catch (const NumericalError& e) {
          numerical_failure(epoch, batch, e.what(), groups);
        }
        if (!std::isfinite(value)) {
          numerical_failure(epoch, batch, "non-finite loss on sequence " + std::to_string(s),
                            groups);
        }
        seq_loss[s] = value;
        batch_tokens += train_set.labels[s].size();
      }
      // Token average: scale the summed gradients once per batch.
      const double inv = 1.0 / static_cast<double>(batch_tokens);
      for (const auto& g : opt.groups()) {
        for (auto p : g.params) {
          for (double& x : p.mutable_grad()) x *= inv;
        }
      }
      const double gnorm = config.clip_norm > 0.0 ? opt.clip_grad_norm(config.clip_norm)
                                                  : opt.grad_norm();
      if (!std::isfinite(gnorm)) numerical_failure(epoch, batch, "non-finite gradient", groups);
      opt.step();
    }

    const double epoch_loss = std::accumulate(seq_loss.begin(), seq_loss.end(), 0.0);
    EpochLog entry{epoch, epoch_loss / static_cast<double>(n_tokens), std::nullopt};
    if (use_dev) entry.dev_score = evaluate(model, *dev_set, config.metric, label_names);
    result.log.push_back(entry);
    if (hooks.on_epoch) hooks.on_epoch(entry);

    const bool better = !use_dev || result.best_epoch == 0 || *entry.dev_score > *result.best_dev_score;
    if (better) {
      result.best = capture(model, echo, epoch, rng_string(rng));
      result.best_epoch = epoch;
      result.best_dev_score = entry.dev_score;
    }
  }
  restore(model, result.best);
  return result;
}

}  // namespace hnmc::train
