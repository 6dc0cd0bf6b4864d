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

#ifndef DIALOGUE_GAMES_DOMAINS_H_
#define DIALOGUE_GAMES_DOMAINS_H_

#include <array>
#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dialogue_games/backends.h"
#include "dialogue_games/game_types.h"

namespace dialogue_games {

inline constexpr std::array<std::string_view, 4> kFruits = {
    "apple", "banana", "blueberry", "kiwi"};
inline constexpr std::array<std::string_view, 7> kDays = {
    "monday", "tuesday", "wednesday", "thursday",
    "friday", "saturday", "sunday"};

std::string PluralFruit(std::string_view fruit, int count);

struct FruitScenario {
  std::array<std::map<std::string, int>, 2> endowment;
  std::array<std::map<std::string, double>, 2> valuations;

  // Throws Error(kConfigInvalid) if a fruit is missing or a count negative.
  void Validate() const;
  static FruitScenario FromScenario(const Scenario& scenario);
  void WriteTo(Scenario& scenario) const;
};

struct MeetingScenario {
  std::array<std::vector<std::string>, 2> available_days;
  std::array<std::map<std::string, double>, 2> day_values;

  void Validate() const;
  static MeetingScenario FromScenario(const Scenario& scenario);
  void WriteTo(Scenario& scenario) const;
  bool Available(int player, std::string_view day) const;
};

struct DebateScenario {
  std::string topic;
  std::array<std::string, 2> sides;  // A permutation of {"for", "against"}.

  void Validate() const;
  static DebateScenario FromScenario(const Scenario& scenario);
  void WriteTo(Scenario& scenario) const;
};

const std::vector<std::string>& NameBank();
const std::vector<std::string>& DebateTopics();
std::vector<std::string> DefaultActionLabels(DomainId domain);
// Bounds every oracle reward for scenarios from GenerateScenario.
std::pair<double, double> DomainUtilityRange(DomainId domain);

// Deterministic in (domain, rng_seed). Names are drawn from the name bank;
// fruit endowments in [0, 4] and valuations in [1, 10]; meeting day values
// in [0, 10] with 2 to 5 available days; debate topic uniform over the list.
// The sender's opening message is a concrete proposal (or opening statement).
Scenario GenerateScenario(DomainId domain, uint64_t rng_seed);

// Full game description for a scenario: domain header template, default
// action menu (unless labels given), utility range, 2 seeds, 1 reply.
GameConfig MakeDomainConfig(
    DomainId domain, const Scenario& scenario,
    std::optional<std::vector<std::string>> action_labels = std::nullopt);
GameConfig GenerateGameConfig(DomainId domain, uint64_t rng_seed);

struct OutcomeParams {
  std::string sender;
  std::string receiver;
  int num_give = 0;
  std::string fruit_give;  // Singular fruit name.
  int num_receive = 0;
  std::string fruit_receive;
  std::string day;
};

// Two-message dialogue (sender proposal, receiver answer) from the
// outcome_<domain>_*.txt templates. Fruit and meeting only. Throws
// Error(kMissingParam) when a placeholder has no value.
std::array<std::string, 2> RenderOutcomeTemplate(DomainId domain,
                                                 OutcomeTag outcome,
                                                 const OutcomeParams& params);

// Phrase-level acceptance / rejection of the standing offer.
bool IsAcceptance(DomainId domain, std::string_view message);
bool IsRejection(DomainId domain, std::string_view message);

struct TradeParse {
  std::map<std::string, int> give;     // From the proposer's perspective.
  std::map<std::string, int> receive;
  bool accepted = false;
  bool rejected = false;
  int proposer = -1;  // Player who offered the trade; -1 if none found.

  bool operator==(const TradeParse&) const = default;
};

// Extracts the last concrete "<n> <fruit> for <m> <fruit>" proposal and the
// accept/reject status of the final message. Total: unparseable text gives
// accepted = rejected = false.
TradeParse ParseTrade(const std::vector<MessageEvent>& messages);

// Proposer gains value(receive) - value(give) under their own valuations,
// the responder the mirror image. Rejected, unaccepted or infeasible trades
// score zero; infeasible accepted trades set invalid_agreement.
RewardJudgment FruitRewardOracle(const FruitScenario& scenario,
                                 const TradeParse& parse);

struct MeetingParse {
  bool accepted = false;
  bool rejected = false;
  std::string day;  // Agreed (or last proposed) day, lowercase.
};
MeetingParse ParseMeeting(const std::vector<MessageEvent>& messages);

// Each player's valuation of the agreed day when it is available to both.
RewardJudgment MeetingRewardOracle(const MeetingScenario& scenario,
                                   const std::vector<MessageEvent>& messages);

class DebateJudge {
 public:
  virtual ~DebateJudge() = default;
  // Index of the winning player.
  virtual int Winner(const DebateScenario& scenario,
                     const std::vector<MessageEvent>& messages,
                     const GameConfig& config) = 0;
};

// Scores each player's messages by word count, doubled for messages that
// carry an instruction marker other than "any". Player 0 wins ties.
class StubDebateJudge : public DebateJudge {
 public:
  int Winner(const DebateScenario& scenario,
             const std::vector<MessageEvent>& messages,
             const GameConfig& config) override;
};

// Uses a reward model (e.g. HttpRewardModel) as judge: the player with the
// larger reported value wins, player 0 on ties.
class ModelDebateJudge : public DebateJudge {
 public:
  explicit ModelDebateJudge(std::shared_ptr<RewardModel> model);
  int Winner(const DebateScenario& scenario,
             const std::vector<MessageEvent>& messages,
             const GameConfig& config) override;

 private:
  std::shared_ptr<RewardModel> model_;
};

RewardJudgment DebateRewardOracle(const DebateScenario& scenario,
                                  const std::vector<MessageEvent>& messages,
                                  DebateJudge& judge,
                                  const GameConfig& config);

// Ground-truth reward model dispatching on config.domain_id.
class OracleRewardModel : public RewardModel {
 public:
  explicit OracleRewardModel(
      std::shared_ptr<DebateJudge> judge = std::make_shared<StubDebateJudge>());
  RewardJudgment Score(const Transcript& transcript,
                       const GameConfig& config) override;
  int64_t parse_failures() const { return parse_failures_.load(); }

 private:
  std::shared_ptr<DebateJudge> judge_;
  std::atomic<int64_t> parse_failures_{0};
};

}  // namespace dialogue_games

#endif  // DIALOGUE_GAMES_DOMAINS_H_
