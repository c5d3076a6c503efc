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

#ifndef HNMC_TRAIN_CHECKPOINT_HPP_
#define HNMC_TRAIN_CHECKPOINT_HPP_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "hnmc/autodiff/tensor.hpp"
#include "hnmc/nn/model.hpp"

// Binary layout (all integers little-endian, see docs/checkpoint-format.md):
//   "HNMCCKPT" | u32 version | u64 n + config JSON | u64 epoch
//   | u64 n + rng state | u64 count | count x tensor
// tensor: u64 n + name | u32 rank | rank x u64 dim | f64 values
namespace hnmc::train {

inline constexpr std::uint32_t kCheckpointVersion = 1;

struct StoredTensor {
  std::string name;
  ad::Shape shape;
  std::vector<double> values;
};

struct Checkpoint {
  nlohmann::json config;
  std::uint64_t epoch = 0;
  std::string rng_state;
  std::vector<StoredTensor> tensors;
};

// Copies the model's parameters, in parameters() order.
Checkpoint capture(const nn::LabeledModel& model, nlohmann::json config, std::uint64_t epoch,
                   std::string rng_state);
// Writes stored values into the model; throws FormatError when names or
// shapes differ.
void restore(nn::LabeledModel& model, const Checkpoint& checkpoint);

void save_checkpoint(std::ostream& out, const Checkpoint& checkpoint);
void save_checkpoint(const std::string& path, const Checkpoint& checkpoint);
// Throws FormatError on a bad magic, unknown version or truncated file.
Checkpoint load_checkpoint(std::istream& in);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace hnmc::train

#endif  // HNMC_TRAIN_CHECKPOINT_HPP_
