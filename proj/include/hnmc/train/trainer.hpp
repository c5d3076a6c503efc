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

#ifndef HNMC_TRAIN_TRAINER_HPP_
#define HNMC_TRAIN_TRAINER_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "hnmc/data/embeddings.hpp"
#include "hnmc/nn/model.hpp"
#include "hnmc/train/checkpoint.hpp"
#include "hnmc/train/config.hpp"

namespace hnmc::train {

struct EpochLog {
  std::size_t epoch = 0;      // 1-based
  double mean_loss = 0.0;     // token-averaged cross-entropy over the epoch
  std::optional<double> dev_score;
};

struct TrainResult {
  std::vector<EpochLog> log;
  Checkpoint best;            // best dev epoch, or the last epoch without dev data
  std::size_t best_epoch = 0;
  std::optional<double> best_dev_score;
};

struct TrainHooks {
  std::function<void(const EpochLog&)> on_epoch;
};

// Mini-batch training. Each batch's objective is its summed token
// cross-entropy divided by its token count; sequences are processed one at a
// time and their gradients summed. On return the model holds the parameters
// of `best`. `label_names` is needed for span F1. `echo` is stored as the
// checkpoint's config.
//
// Throws NumericalError, naming epoch, batch and parameter norms, when the
// loss or a gradient stops being finite.
TrainResult train(nn::LabeledModel& model, const data::SequenceBatch& train_set,
                  const data::SequenceBatch* dev_set, const TrainConfig& config,
                  const std::vector<std::string>& label_names = {},
                  const nlohmann::json& echo = {}, const TrainHooks& hooks = {});

// Per-position argmax; the first maximal index wins ties.
std::vector<int> predict(const nn::LabeledModel& model, const ad::Tensor& inputs);

// Accuracy or span F1 of argmax predictions. Throws ShapeError on an empty
// dataset.
double evaluate(const nn::LabeledModel& model, const data::SequenceBatch& dataset,
                MetricKind metric, const std::vector<std::string>& label_names = {});

// Mean token cross-entropy, without gradients.
double mean_loss(const nn::LabeledModel& model, const data::SequenceBatch& dataset);

}  // namespace hnmc::train

#endif  // HNMC_TRAIN_TRAINER_HPP_
