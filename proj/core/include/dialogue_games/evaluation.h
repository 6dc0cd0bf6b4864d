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

#ifndef DIALOGUE_GAMES_EVALUATION_H_
#define DIALOGUE_GAMES_EVALUATION_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dialogue_games/backends.h"
#include "dialogue_games/dialogue_game.h"
#include "dialogue_games/domains.h"
#include "dialogue_games/game_types.h"
#include "dialogue_games/util.h"

namespace dialogue_games {

struct SteeringReport {
  std::vector<std::string> labels;
  std::vector<int64_t> correct;
  std::vector<int64_t> samples;
  // Samples whose classifier output tied the instructed label with another.
  int64_t ambiguous = 0;

  double Accuracy(int label) const;
  double Overall() const;
  int64_t TotalSamples() const;
  int64_t TotalCorrect() const;
  double RandomBaseline() const { return 1.0 / labels.size(); }

  // label,accuracy,samples per label, then a "total" row.
  std::string ToCsv() const;
  // Recovers labels, accuracies and sample counts (correct is rounded from
  // accuracy * samples).
  static SteeringReport FromCsv(std::string_view csv);
};

// Draws an instruction uniformly per sample, generates a message for a
// scenario of the domain, and counts a success when the instruction is in
// the classifier's argmax set.
SteeringReport SteeringAccuracy(DomainId domain, TextGenerator& generator,
                                ActionClassifier& classifier,
                                const std::vector<std::string>& labels,
                                int num_samples, uint64_t rng_seed);

// -1, 0 or +1 with |x| <= 1e-9 counted as zero.
int SignBucket(double value);

struct RewardErrorRow {
  std::string outcome;  // valid, rejected, incomplete or All.
  double norm = 0.0;
  double sgn = 0.0;
  int64_t samples = 0;
};

struct RewardErrorReport {
  std::vector<RewardErrorRow> rows;

  // outcome,norm,sgn,samples
  std::string ToCsv() const;
  static RewardErrorReport FromCsv(std::string_view csv);
};

// A templated two-message dialogue with its configuration.
struct OutcomeScenario {
  GameConfig config;
  OutcomeParams params;
  Transcript transcript;
};

// Random scenario and trade/day of the requested outcome type. Valid fruit
// trades are feasible for both players and meeting days available to both.
OutcomeScenario GenerateOutcomeScenario(DomainId domain, OutcomeTag outcome,
                                        Rng& rng);

// Scores num_scenarios templated dialogues with model and oracle and
// aggregates the 2 * num_scenarios per-player errors.
RewardErrorRow RewardError(DomainId domain, RewardModel& model,
                           RewardModel& oracle, OutcomeTag outcome,
                           int num_scenarios, uint64_t rng_seed);
// One row per outcome type plus "All" (pooled samples).
RewardErrorReport RewardErrorAll(DomainId domain, RewardModel& model,
                                 RewardModel& oracle, int num_scenarios,
                                 uint64_t rng_seed);

struct Table1Row {
  std::string domain;
  uint64_t game_seed = 0;
  double nash_conv = 0.0;
  double cfr_gain = 0.0;
  bool ess = false;
  GameStats stats;  // Backend traffic while building the tree.
};

struct Table1Report {
  std::vector<Table1Row> games;
  Table1Row average;  // ess from the averaged values.

  // domain,nashconv,cfr_gain,ess
  std::string SummaryCsv() const;
  // domain,game_seed,nashconv,cfr_gain,ess
  std::string GamesCsv() const;
};

Table1Row EvaluateGame(const GameConfig& config, uint64_t game_seed,
                       int cfr_iterations, const BackendBundle& backends);

// Exact expectations by tree enumeration over the games from
// GenerateGameConfig(domain, first_seed + i).
Table1Report RunTable1Protocol(DomainId domain, int num_games,
                               int cfr_iterations,
                               const BackendBundle& backends,
                               uint64_t first_seed = 0);
Table1Report RunTable1Protocol(const std::vector<GameConfig>& games,
                               const std::vector<uint64_t>& game_seeds,
                               int cfr_iterations,
                               const BackendBundle& backends);

}  // namespace dialogue_games

#endif  // DIALOGUE_GAMES_EVALUATION_H_
