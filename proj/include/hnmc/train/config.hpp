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

#ifndef HNMC_TRAIN_CONFIG_HPP_
#define HNMC_TRAIN_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hnmc/nn/model.hpp"
#include "hnmc/train/optimizer.hpp"

namespace hnmc::train {

enum class MetricKind { kAccuracy, kSpanF1 };

std::string_view to_string(MetricKind kind);
MetricKind parse_metric(std::string_view name);

struct TrainConfig {
  std::size_t batch_size = 32;
  std::size_t epochs = 30;
  double lr_model = 0.005;                 // single-group models (arch 1)
  std::vector<double> lr_layers{0.05, 0.005};  // one per group for arch 2 and 3
  OptimizerKind optimizer = OptimizerKind::kAdam;
  AdamHyper adam;
  std::uint64_t seed = 0;
  bool shuffle = true;
  double clip_norm = 0.0;  // 0 disables clipping
  MetricKind metric = MetricKind::kAccuracy;
};

// Throws ParameterError. Learning rates may be 0 (a frozen group).
void validate(const TrainConfig& config, std::size_t n_groups);

// Learning rate of each parameter group.
std::vector<double> group_learning_rates(const TrainConfig& config, std::size_t n_groups);

nlohmann::json to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const nn::ArchitectureSpec& spec);
nn::ArchitectureSpec architecture_from_json(const nlohmann::json& j);

}  // namespace hnmc::train

#endif  // HNMC_TRAIN_CONFIG_HPP_
