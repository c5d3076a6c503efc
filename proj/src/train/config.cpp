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

#include "hnmc/train/config.hpp"

#include <cmath>
#include <string>

#include "hnmc/errors.hpp"

namespace hnmc::train {

using nlohmann::json;

std::string_view to_string(MetricKind kind) {
  return kind == MetricKind::kAccuracy ? "accuracy" : "span_f1";
}

MetricKind parse_metric(std::string_view name) {
  if (name == "accuracy") return MetricKind::kAccuracy;
  if (name == "span_f1" || name == "f1") return MetricKind::kSpanF1;
  throw ParameterError("unknown metric '" + std::string(name) + "' (accuracy|span_f1)");
}

namespace {

void check_lr(double lr, const char* what) {
  if (!std::isfinite(lr) || lr < 0.0) {
    throw ParameterError(std::string(what) + " must be finite and >= 0, got " +
                         std::to_string(lr));
  }
}

}  // namespace

void validate(const TrainConfig& config, std::size_t n_groups) {
  if (config.batch_size < 1) throw ParameterError("batch_size must be >= 1");
  if (config.epochs < 1) throw ParameterError("epochs must be >= 1");
  if (!(config.clip_norm >= 0.0)) throw ParameterError("clip_norm must be >= 0");
  const auto& h = config.adam;
  if (!(h.beta1 >= 0.0 && h.beta1 < 1.0) || !(h.beta2 >= 0.0 && h.beta2 < 1.0) ||
      !(h.eps > 0.0)) {
    throw ParameterError("adam hyperparameters out of range");
  }
  if (n_groups <= 1) {
    check_lr(config.lr_model, "lr");
    return;
  }
  if (config.lr_layers.size() != n_groups) {
    throw ParameterError("this architecture has " + std::to_string(n_groups) +
                         " parameter groups but " + std::to_string(config.lr_layers.size()) +
                         " layer learning rates were given");
  }
  for (double lr : config.lr_layers) check_lr(lr, "layer learning rate");
}

std::vector<double> group_learning_rates(const TrainConfig& config, std::size_t n_groups) {
  validate(config, n_groups);
  if (n_groups <= 1) return std::vector<double>(n_groups, config.lr_model);
  return config.lr_layers;
}

json to_json(const TrainConfig& c) {
  return json{{"batch_size", c.batch_size},
              {"epochs", c.epochs},
              {"lr_model", c.lr_model},
              {"lr_layers", c.lr_layers},
              {"optimizer", to_string(c.optimizer)},
              {"adam", {{"beta1", c.adam.beta1}, {"beta2", c.adam.beta2}, {"eps", c.adam.eps}}},
              {"seed", c.seed},
              {"shuffle", c.shuffle},
              {"clip_norm", c.clip_norm},
              {"metric", to_string(c.metric)}};
}

TrainConfig train_config_from_json(const json& j) {
  try {
    TrainConfig c;
    c.batch_size = j.at("batch_size").get<std::size_t>();
    c.epochs = j.at("epochs").get<std::size_t>();
    c.lr_model = j.at("lr_model").get<double>();
    c.lr_layers = j.at("lr_layers").get<std::vector<double>>();
    c.optimizer = parse_optimizer(j.at("optimizer").get<std::string>());
    c.adam.beta1 = j.at("adam").at("beta1").get<double>();
    c.adam.beta2 = j.at("adam").at("beta2").get<double>();
    c.adam.eps = j.at("adam").at("eps").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.shuffle = j.at("shuffle").get<bool>();
    c.clip_norm = j.at("clip_norm").get<double>();
    c.metric = parse_metric(j.at("metric").get<std::string>());
    return c;
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad train config: ") + e.what());
  }
}

json to_json(const nn::ArchitectureSpec& s) {
  return json{{"model", nn::to_string(s.type)},
              {"arch", s.arch},
              {"hidden_size", s.hidden_size},
              {"n_labels", s.n_labels},
              {"embedding_dim", s.embedding_dim},
              {"kernel",
               {{"hidden", s.kernel.hidden},
                {"hidden_activation", nn::to_string(s.kernel.hidden_activation)},
                {"output_activation", nn::to_string(s.kernel.output_activation)}}}};
}

nn::ArchitectureSpec architecture_from_json(const json& j) {
  try {
    nn::ArchitectureSpec s;
    s.type = nn::parse_model_type(j.at("model").get<std::string>());
    s.arch = j.at("arch").get<int>();
    s.hidden_size = j.at("hidden_size").get<std::size_t>();
    s.n_labels = j.at("n_labels").get<std::size_t>();
    s.embedding_dim = j.at("embedding_dim").get<std::size_t>();
    const auto& k = j.at("kernel");
    s.kernel.hidden = k.at("hidden").get<std::vector<std::size_t>>();
    s.kernel.hidden_activation = nn::parse_activation(k.at("hidden_activation").get<std::string>());
    s.kernel.output_activation = nn::parse_activation(k.at("output_activation").get<std::string>());
    return s;
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad architecture: ") + e.what());
  }
}

}  // namespace hnmc::train
