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

#ifndef HNMC_CLI_VERIFY_HPP_
#define HNMC_CLI_VERIFY_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "hnmc/prob/params.hpp"

namespace hnmc::cli {

struct CheckResult {
  std::string name;
  double worst = 0.0;      // worst error seen
  double tolerance = 0.0;  // passes when worst < tolerance
  std::size_t cases = 0;
  double seconds = 0.0;
  std::string worst_case;  // description of the case that produced `worst`

  bool passed() const { return cases > 0 && worst < tolerance; }
};

// Random draws of (N, M, T) uniformly from the inclusive ranges, one seeded
// random stationary model and observation sequence per draw.
struct OracleGrid {
  prob::ModelKind kind = prob::ModelKind::kHmm;
  std::size_t models = 100;
  std::size_t min_states = 2, max_states = 4;
  std::size_t min_obs = 2, max_obs = 3;
  std::size_t min_length = 1, max_length = 6;
  std::uint64_t seed = 0;
};

// Entropic forward-backward against brute-force enumeration, max abs error.
// `inject_fault` shifts the first observation by one symbol before the
// entropic pass, which must make the check fail (negative control).
CheckResult oracle_check(const OracleGrid& grid, double tolerance, bool inject_fault = false);

// Scaled generative forward-backward against enumeration (order-1 only).
CheckResult classic_check(const OracleGrid& grid, double tolerance);

// alpha_t * prod_{s<=t} p(y_s) = alpha'_t and beta_t * prod_{s>t} p(y_s) =
// beta'_t for the unnormalized entropic tables.
CheckResult scale_relation_check(prob::ModelKind kind, std::size_t models, std::uint64_t seed,
                           double tolerance);

// Posteriors under random per-step factors 10^U(-4,4) against per-step
// normalization.
CheckResult scaling_check(prob::ModelKind kind, std::size_t models, std::uint64_t seed,
                          double tolerance);

// Autodiff against central differences for every model type and
// architecture, on T x D inputs with N labels (and hidden width N).
CheckResult gradient_check(std::size_t T, std::size_t D, std::size_t N, double tolerance);

// Layers whose kernels encode entropic tables against prob-core posteriors.
CheckResult table_embedding_check(prob::ModelKind kind, std::size_t models, std::uint64_t seed,
                                  double tolerance);

struct VerifyOptions {
  std::size_t seeds = 100;  // models per oracle grid
  std::size_t max_states = 4;
  std::size_t max_length = 6;
  std::uint64_t seed = 0;
  bool inject_fault = false;
};

// Every check of the verify command. Throws CapExceededError when
// max_length exceeds the enumeration cap and ParameterError on ranges
// that cannot be drawn from.
std::vector<CheckResult> run_verify(const VerifyOptions& options);

}  // namespace hnmc::cli

#endif  // HNMC_CLI_VERIFY_HPP_
