// Copyright 2026 The paudit Authors
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

// Command-line front end. Every command is deterministic given its inputs and
// --seed; commands writing --out also write <out>.manifest.json.

#ifndef PAUDIT_TOOLS_CLI_HPP_
#define PAUDIT_TOOLS_CLI_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace paudit::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode { kOk = 0, kInputError = 1, kInfeasible = 2 };

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace paudit::cli

#endif  // PAUDIT_TOOLS_CLI_HPP_
