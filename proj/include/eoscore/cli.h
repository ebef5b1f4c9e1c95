// Copyright 2026 The eoscore Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef EOSCORE_CLI_H_
#define EOSCORE_CLI_H_

#include <iosfwd>
#include <span>
#include <string>

#include "eoscore/error.h"

namespace eoscore {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitAborted = 130;

// Exit status reported for an Error with `code`.
int ExitCodeFor(ErrorCode code);

// Runs `eoscore <subcommand> ...`. `args` excludes the program name.
// Results go to `out`; prompts, warnings and diagnostics go to `err`.
int RunCli(std::span<const std::string> args, std::istream& in,
           std::ostream& out, std::ostream& err);

}  // namespace eoscore

#endif  // EOSCORE_CLI_H_
