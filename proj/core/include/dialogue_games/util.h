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

#ifndef DIALOGUE_GAMES_UTIL_H_
#define DIALOGUE_GAMES_UTIL_H_

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dialogue_games {

// 64-bit FNV-1a followed by a splitmix64 finalizer. Stable across platforms
// and process restarts; used for stub backends, memo keys and config hashes.
uint64_t Hash64(std::string_view bytes, uint64_t salt = 0);
uint64_t MixHash(uint64_t a, uint64_t b);
std::string HexHash(uint64_t hash);

// Maps a hash to [0, 1) using its top 53 bits.
double HashToUnit(uint64_t hash);

// Deterministic random helpers. std::mt19937_64 is specified bit-exactly by
// the standard; the distributions in <random> are not, so these replace them.
using Rng = std::mt19937_64;
double UniformDouble(Rng& rng);
// Uniform integer in [lo, hi] (inclusive).
int64_t UniformInt(Rng& rng, int64_t lo, int64_t hi);

// Shortest decimal representation that round-trips to the same double.
std::string FormatDouble(double value);
double ParseDouble(std::string_view text);

std::string Trim(std::string_view text);
std::string ToLower(std::string_view text);
// Lowercase + trim; used for label identity.
std::string NormalizeLabel(std::string_view label);
// Collapses every run of whitespace into a single space and trims.
std::string CollapseWhitespace(std::string_view text);
std::vector<std::string> SplitLines(std::string_view text);
std::string StripTrailingNewlines(std::string_view text);
std::string ReplaceAll(std::string text, std::string_view from,
                       std::string_view to);

// Reads/writes a whole file; failures throw Error(kIoError).
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view contents);

// Minimal CSV support for the report formats: fields containing a comma,
// quote or newline are quoted, quotes doubled.
std::string CsvEscape(std::string_view field);
std::vector<std::vector<std::string>> ParseCsv(std::string_view text);

// Neumaier-compensated summation; keeps aggregates over thousands of
// samples within rounding of the exact sum regardless of arrival order.
double StableSum(std::span<const double> values);

}  // namespace dialogue_games

#endif  // DIALOGUE_GAMES_UTIL_H_
