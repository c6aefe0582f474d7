// Copyright 2026 The fwsimp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FWSIMP_CLI_H_
#define FWSIMP_CLI_H_

#include <ostream>

namespace fwsimp {

// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitViolation = 1,  // check findings, diff differences, model errors
  kExitParse = 2,      // unreadable or malformed input
  kExitLoop = 3,
  kExitLimit = 4,  // normalization blowup or universe cap
  kExitUnknownHit = 5,
  kExitNotEmittable = 6,
  kExitUsage = 64,
};

// Entry point of the `fwsimp` tool. Artifacts go to `out`, diagnostics and
// stage telemetry to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace fwsimp

#endif  // FWSIMP_CLI_H_
