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

#ifndef DIALOGUE_GAMES_ASSETS_H_
#define DIALOGUE_GAMES_ASSETS_H_

#include <string>
#include <string_view>
#include <vector>

namespace dialogue_games {

// Returns the text of a compiled-in asset from core/assets/ by file name.
// Throws Error(kMissingAsset) for unknown names.
std::string_view Asset(std::string_view name);

std::vector<std::string> AssetNames();

}  // namespace dialogue_games

#endif  // DIALOGUE_GAMES_ASSETS_H_
