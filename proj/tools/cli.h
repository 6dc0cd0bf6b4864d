// Copyright 2026 The Dialogue Games Authors
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

#ifndef DIALOGUE_GAMES_TOOLS_CLI_H_
#define DIALOGUE_GAMES_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace dialogue_games::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitBackend = 2;

// args excludes the program name. Reports go under --out; a summary is
// printed to out and diagnostics to err.
int CliDispatch(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err);

}  // namespace dialogue_games::cli

#endif  // DIALOGUE_GAMES_TOOLS_CLI_H_
