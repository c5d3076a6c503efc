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

#include "hnmc/cli/manifest.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "hnmc/errors.hpp"

namespace hnmc::cli {

double mean(std::span<const double> xs) {
  if (xs.empty()) throw ShapeError("mean of no values");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

std::optional<double> ci95_half_width(std::span<const double> xs) {
  if (xs.size() < 2) return std::nullopt;
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  const double n = static_cast<double>(xs.size());
  const double sd = std::sqrt(ss / (n - 1.0));
  const boost::math::students_t dist(n - 1.0);
  return boost::math::quantile(dist, 0.975) * sd / std::sqrt(n);
}

std::string format_cell(std::span<const double> scores) {
  char buf[64];
  const auto hw = ci95_half_width(scores);
  if (hw) {
    std::snprintf(buf, sizeof buf, "%.2f ± %.2f", 100.0 * mean(scores), 100.0 * *hw);
  } else {
    std::snprintf(buf, sizeof buf, "%.2f", 100.0 * mean(scores));
  }
  return buf;
}

nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json runs = nlohmann::json::array();
  std::vector<double> scores;
  std::vector<std::uint64_t> seeds;
  for (const auto& r : m.runs) {
    runs.push_back({{"seed", r.seed},
                    {"score", r.score},
                    {"best_epoch", r.best_epoch},
                    {"checkpoint", r.checkpoint},
                    {"log", r.log}});
    scores.push_back(r.score);
    seeds.push_back(r.seed);
  }
  nlohmann::json j{{"manifest_version", kManifestVersion},
                   {"config", m.config},
                   {"seeds", seeds},
                   {"metric", m.metric},
                   {"score_source", m.score_source},
                   {"runs", runs}};
  if (!scores.empty()) {
    j["mean"] = mean(scores);
    const auto hw = ci95_half_width(scores);
    j["ci95_half_width"] = hw ? nlohmann::json(*hw) : nlohmann::json(nullptr);
    j["summary"] = format_cell(scores);
  }
  return j;
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write manifest '" + path + "'");
  out << to_json(manifest).dump(2) << '\n';
}

}  // namespace hnmc::cli
