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

#ifndef HNMC_NN_MODEL_HPP_
#define HNMC_NN_MODEL_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hnmc/nn/layer.hpp"

namespace hnmc::nn {

enum class ModelType { kRnn, kBirnn, kHnmc, kHnmc2, kHnmcCn };

std::string_view to_string(ModelType type);
ModelType parse_model_type(std::string_view name);
bool is_entropic(ModelType type);

// arch 1: one layer of width n_labels feeding the softmax.
// arch 2: one layer of width hidden_size, then a linear head.
// arch 3: a layer of width hidden_size stacked under a layer of width
//         n_labels; the first layer's output is the second's observation.
struct ArchitectureSpec {
  ModelType type = ModelType::kHnmc;
  int arch = 1;
  std::size_t hidden_size = 0;
  std::size_t n_labels = 0;
  std::size_t embedding_dim = 0;
  KernelOptions kernel;
};

// Throws ParameterError on an invalid combination.
void validate(const ArchitectureSpec& spec);

// logits = x W + b, row-wise.
class DenseHead {
 public:
  DenseHead(std::size_t in, std::size_t out, std::mt19937_64& rng);
  Tensor forward(const Tensor& inputs) const;
  void collect(const std::string& prefix, std::vector<NamedTensor>& out) const;
  const Tensor& weight() const noexcept { return weight_; }
  const Tensor& bias() const noexcept { return bias_; }

 private:
  Tensor weight_, bias_;
};

struct ParameterGroup {
  std::string name;
  std::vector<NamedTensor> params;
};

class LabeledModel {
 public:
  LabeledModel(ArchitectureSpec spec, std::uint64_t seed);

  // [T, embedding_dim] -> [T, n_labels] scores before the softmax.
  Tensor logits(const Tensor& inputs) const;

  // Group 0 holds the first layer; group 1 (arch 2 and 3) the rest.
  std::vector<ParameterGroup> parameter_groups() const;
  std::vector<NamedTensor> parameters() const;
  std::size_t parameter_count() const;

  const ArchitectureSpec& spec() const noexcept { return spec_; }
  std::size_t n_layers() const noexcept { return layers_.size(); }
  SequenceLayer& layer(std::size_t i) { return *layers_.at(i); }
  const SequenceLayer& layer(std::size_t i) const { return *layers_.at(i); }
  const DenseHead* head() const { return head_ ? &*head_ : nullptr; }

 private:
  ArchitectureSpec spec_;
  std::vector<std::unique_ptr<SequenceLayer>> layers_;
  std::optional<DenseHead> head_;
};

LabeledModel build_model(const ArchitectureSpec& spec, std::uint64_t seed);

}  // namespace hnmc::nn

#endif  // HNMC_NN_MODEL_HPP_
