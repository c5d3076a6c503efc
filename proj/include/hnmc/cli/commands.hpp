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

#ifndef HNMC_CLI_COMMANDS_HPP_
#define HNMC_CLI_COMMANDS_HPP_

#include <iosfwd>

namespace hnmc::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,  // bad flags or unusable input
  kExitVerifyFailed = 2,
  kExitNumerical = 3,
};

// Entry point of the `hnmc` tool: subcommands train, evaluate, predict and
// verify. Never throws; errors are printed to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hnmc::cli

#endif  // HNMC_CLI_COMMANDS_HPP_
