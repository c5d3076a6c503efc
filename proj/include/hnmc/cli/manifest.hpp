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

#ifndef HNMC_CLI_MANIFEST_HPP_
#define HNMC_CLI_MANIFEST_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace hnmc::cli {

inline constexpr int kManifestVersion = 1;

struct RunRecord {
  std::uint64_t seed = 0;
  double score = 0.0;  // fraction in [0, 1]
  std::size_t best_epoch = 0;
  std::string checkpoint;  // file name relative to the manifest
  std::string log;
};

struct RunManifest {
  nlohmann::json config;  // everything needed to rerun, seeds excluded
  std::string metric;
  std::string score_source;  // "dev" or "train"
  std::vector<RunRecord> runs;
};

double mean(std::span<const double> xs);
// Half-width of the two-sided 95% Student-t interval for the mean:
// t_{0.975, n-1} * s / sqrt(n). Empty for fewer than two scores.
std::optional<double> ci95_half_width(std::span<const double> xs);

// "97.94 ± 0.35" in percent with two decimals; just "97.94" for one run.
std::string format_cell(std::span<const double> scores);

nlohmann::json to_json(const RunManifest& manifest);
void write_manifest(const std::string& path, const RunManifest& manifest);

}  // namespace hnmc::cli

#endif  // HNMC_CLI_MANIFEST_HPP_
