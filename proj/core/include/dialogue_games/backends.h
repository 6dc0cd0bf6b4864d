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

#ifndef DIALOGUE_GAMES_BACKENDS_H_
#define DIALOGUE_GAMES_BACKENDS_H_

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dialogue_games/game_types.h"

namespace dialogue_games {

// Structured hints about the prompt. Remote backends only see the prompt
// text; the stub uses these to stay a cheap pure function.
struct GenerationContext {
  DomainId domain = DomainId::kFruit;
  std::string action_label;
  std::vector<std::string> action_labels;
  std::string sender;
  std::string receiver;
};

struct GenerationRequest {
  std::string prompt;
  int seed = 0;
  int max_tokens = 256;
  GenerationContext context;
};

enum class OutcomeTag { kValid, kRejected, kIncomplete };

std::string_view OutcomeTagName(OutcomeTag tag);
// Throws Error(kParseError).
OutcomeTag ParseOutcomeTag(std::string_view name);

struct RewardJudgment {
  std::vector<double> values;  // One per player.
  OutcomeTag outcome = OutcomeTag::kIncomplete;
  std::string rationale;
  // Set when the rule oracle could not parse the transcript and fell back
  // to zero rewards, or when an accepted trade was not feasible.
  bool parse_failure = false;
  bool invalid_agreement = false;
};

// Dialogue generation model: one message body per (prompt, seed).
class TextGenerator {
 public:
  virtual ~TextGenerator() = default;
  virtual std::string Generate(const GenerationRequest& request) = 0;
};

// Predicts which instruction a message was written under. Always returns a
// probability vector aligned with labels.
class ActionClassifier {
 public:
  virtual ~ActionClassifier() = default;
  virtual std::vector<double> Classify(std::string_view message,
                                       std::span<const std::string> labels) = 0;
};

class TerminationJudge {
 public:
  virtual ~TerminationJudge() = default;
  virtual bool IsTerminal(const Transcript& transcript,
                          const GameConfig& config) = 0;
};

class RewardModel {
 public:
  virtual ~RewardModel() = default;
  virtual RewardJudgment Score(const Transcript& transcript,
                               const GameConfig& config) = 0;
  // Models that only read message text can be memoized on the public
  // thread; models that read decisions must be memoized per history.
  virtual bool UsesDecisions() const { return false; }
};

struct BackendBundle {
  std::shared_ptr<TextGenerator> generator;
  std::shared_ptr<ActionClassifier> classifier;
  std::shared_ptr<TerminationJudge> terminator;
  std::shared_ptr<RewardModel> reward;
};

// Index set of maximal entries (ties within 1e-12 included).
std::vector<int> ArgmaxSet(std::span<const double> values);

}  // namespace dialogue_games

#endif  // DIALOGUE_GAMES_BACKENDS_H_
