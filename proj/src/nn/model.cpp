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

#include "hnmc/nn/model.hpp"

#include <random>
#include <string>

#include "hnmc/autodiff/ops.hpp"
#include "hnmc/errors.hpp"
#include "hnmc/nn/efb_layers.hpp"
#include "hnmc/nn/rnn_layers.hpp"

namespace hnmc::nn {
namespace {

std::unique_ptr<SequenceLayer> make_layer(const ArchitectureSpec& spec, std::size_t in,
                                          std::size_t width, std::mt19937_64& rng) {
  switch (spec.type) {
    case ModelType::kRnn: return std::make_unique<RnnLayer>(in, width, rng);
    case ModelType::kBirnn: return std::make_unique<BiRnnLayer>(in, width, rng);
    case ModelType::kHnmc: return std::make_unique<HnmcLayer>(in, width, spec.kernel, rng);
    case ModelType::kHnmc2: return std::make_unique<Hnmc2Layer>(in, width, spec.kernel, rng);
    case ModelType::kHnmcCn: return std::make_unique<HnmcCnLayer>(in, width, spec.kernel, rng);
  }
  throw ParameterError("unknown model type");
}

}  // namespace

std::string_view to_string(ModelType type) {
  switch (type) {
    case ModelType::kRnn: return "rnn";
    case ModelType::kBirnn: return "birnn";
    case ModelType::kHnmc: return "hnmc";
    case ModelType::kHnmc2: return "hnmc2";
    case ModelType::kHnmcCn: return "hnmc-cn";
  }
  return "unknown";
}

ModelType parse_model_type(std::string_view name) {
  if (name == "rnn") return ModelType::kRnn;
  if (name == "birnn") return ModelType::kBirnn;
  if (name == "hnmc") return ModelType::kHnmc;
  if (name == "hnmc2") return ModelType::kHnmc2;
  if (name == "hnmc-cn" || name == "hnmc_cn") return ModelType::kHnmcCn;
  throw ParameterError("unknown model type '" + std::string(name) + "'");
}

bool is_entropic(ModelType type) {
  return type == ModelType::kHnmc || type == ModelType::kHnmc2 || type == ModelType::kHnmcCn;
}

void validate(const ArchitectureSpec& spec) {
  if (spec.arch < 1 || spec.arch > 3) {
    throw ParameterError("architecture must be 1, 2 or 3, got " + std::to_string(spec.arch));
  }
  if (spec.n_labels == 0) throw ParameterError("need at least one label");
  if (spec.embedding_dim == 0) throw ParameterError("embedding dimension must be positive");
  if (spec.arch != 1 && spec.hidden_size == 0) {
    throw ParameterError("architectures 2 and 3 need a positive hidden size");
  }
  for (std::size_t w : spec.kernel.hidden) {
    if (w == 0) throw ParameterError("kernel hidden widths must be positive");
  }
}

DenseHead::DenseHead(std::size_t in, std::size_t out, std::mt19937_64& rng)
    : weight_(init_uniform({in, out}, in, rng)), bias_(init_uniform({out}, in, rng)) {}

Tensor DenseHead::forward(const Tensor& inputs) const {
  return ad::matmul(inputs, weight_) + bias_;
}

void DenseHead::collect(const std::string& prefix, std::vector<NamedTensor>& out) const {
  out.push_back({prefix + ".w", weight_});
  out.push_back({prefix + ".b", bias_});
}

LabeledModel::LabeledModel(ArchitectureSpec spec, std::uint64_t seed) : spec_(std::move(spec)) {
  validate(spec_);
  std::mt19937_64 rng(seed);
  switch (spec_.arch) {
    case 1:
      layers_.push_back(make_layer(spec_, spec_.embedding_dim, spec_.n_labels, rng));
      break;
    case 2:
      layers_.push_back(make_layer(spec_, spec_.embedding_dim, spec_.hidden_size, rng));
      head_.emplace(layers_[0]->output_dim(), spec_.n_labels, rng);
      break;
    default:
      layers_.push_back(make_layer(spec_, spec_.embedding_dim, spec_.hidden_size, rng));
      layers_.push_back(make_layer(spec_, layers_[0]->output_dim(), spec_.n_labels, rng));
      break;
  }
}

Tensor LabeledModel::logits(const Tensor& inputs) const {
  if (head_) return head_->forward(layers_[0]->forward(inputs));
  if (layers_.size() == 2) return layers_[1]->logits(layers_[0]->forward(inputs));
  return layers_[0]->logits(inputs);
}

std::vector<ParameterGroup> LabeledModel::parameter_groups() const {
  std::vector<ParameterGroup> groups;
  groups.push_back({"layer0", {}});
  layers_[0]->collect("layer0", groups.back().params);
  if (head_) {
    groups.push_back({"head", {}});
    head_->collect("head", groups.back().params);
  } else if (layers_.size() == 2) {
    groups.push_back({"layer1", {}});
    layers_[1]->collect("layer1", groups.back().params);
  }
  return groups;
}

std::vector<NamedTensor> LabeledModel::parameters() const {
  std::vector<NamedTensor> all;
  for (auto& g : parameter_groups()) {
    for (auto& p : g.params) all.push_back(std::move(p));
  }
  return all;
}

std::size_t LabeledModel::parameter_count() const {
  std::size_t n = 0;
  for (const auto& p : parameters()) n += p.tensor.size();
  return n;
}

LabeledModel build_model(const ArchitectureSpec& spec, std::uint64_t seed) {
  return LabeledModel(spec, seed);
}

}  // namespace hnmc::nn
