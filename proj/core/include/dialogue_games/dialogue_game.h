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

#ifndef DIALOGUE_GAMES_DIALOGUE_GAME_H_
#define DIALOGUE_GAMES_DIALOGUE_GAME_H_

#include <atomic>
#include <cstdint>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dialogue_games/backends.h"
#include "dialogue_games/game_types.h"

namespace dialogue_games {

struct NodeKind {
  enum Type { kDecision, kChance, kTerminal };
  Type type = kDecision;
  int player = -1;  // Mover at decision nodes.

  bool operator==(const NodeKind&) const = default;
};

struct GameStats {
  int64_t generation_calls = 0;
  int64_t judge_calls = 0;
  int64_t reward_calls = 0;
  // Distinct (mover infostate, action, seed) transitions realized so far.
  int64_t distinct_transitions = 0;
  int64_t distinct_reward_keys = 0;
};

// The generation prompt for player writing the next message under the
// instruction action_labels[action_index]. Pure function of its inputs.
// Throws Error(kTemplateError) on unknown placeholders.
std::string RenderGenerationPrompt(const GameConfig& config,
                                   const std::vector<MessageEvent>& messages,
                                   int player, int action_index);

// A dialogue task bound to an extensive-form game. Decision nodes choose an
// instruction, chance nodes choose a generation seed and realize the message
// through the generation backend.
//
// Transitions are memoized on (mover's infostate key, action, seed): every
// input of the generation prompt is part of that key, so the same message
// is never generated twice. Terminal rewards are memoized on the public
// thread, or on the full history for reward models that read decisions.
// The memo tables are safe for concurrent use; states are plain values.
class DialogueGame {
 public:
  // Throws Error(kConfigInvalid).
  DialogueGame(GameConfig config, BackendBundle backends);

  DialogueGame(const DialogueGame&) = delete;
  DialogueGame& operator=(const DialogueGame&) = delete;

  const GameConfig& config() const { return config_; }
  const BackendBundle& backends() const { return backends_; }
  int num_players() const { return config_.num_players; }
  int num_actions() const {
    return static_cast<int>(config_.action_labels.size());
  }

  // The opening message alone; the receiver of the opening message moves.
  DialogueState NewInitialState() const;

  NodeKind Kind(const DialogueState& state) const;
  // Throws Error(kWrongNodeKind) unless state is a decision node.
  std::vector<int> LegalActions(const DialogueState& state) const;
  // Uniform over seeds 0..num_llm_seeds-1. Throws Error(kWrongNodeKind).
  std::vector<std::pair<int, double>> ChanceOutcomes(
      const DialogueState& state) const;

  // Throws Error(kIllegalAction), Error(kWrongNodeKind) at terminals, or
  // Error(kBackendFailure) with the failing transition as context.
  DialogueState ApplyAction(const DialogueState& state,
                            int action_or_seed) const;

  // The generation prompt for player taking action_index at the decision
  // node state. Throws Error(kTemplateError) on unknown placeholders.
  std::string FormatPrompt(const DialogueState& state, int player,
                           int action_index) const;

  // Clamped into [min_utility, max_utility]. Throws Error(kNotTerminal).
  std::vector<double> Returns(const DialogueState& state) const;

  InfostateKey GetInfostateKey(const DialogueState& state, int player) const;
  Transcript MakeTranscript(const DialogueState& state) const;

  GameStats stats() const;

 private:
  struct Transition {
    std::string text;
    bool judged_terminal = false;
  };

  int NextMover(const DialogueState& state) const;
  std::vector<double> ComputeReturns(const DialogueState& state) const;

  GameConfig config_;
  BackendBundle backends_;
  int opening_author_ = 0;

  mutable std::shared_mutex mu_;
  mutable std::unordered_map<std::string, Transition> transitions_;
  mutable std::unordered_map<std::string, std::vector<double>> rewards_;
  mutable std::atomic<int64_t> generation_calls_{0};
  mutable std::atomic<int64_t> judge_calls_{0};
  mutable std::atomic<int64_t> reward_calls_{0};
};

}  // namespace dialogue_games

#endif  // DIALOGUE_GAMES_DIALOGUE_GAME_H_
