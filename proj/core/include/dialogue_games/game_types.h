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

#ifndef DIALOGUE_GAMES_GAME_TYPES_H_
#define DIALOGUE_GAMES_GAME_TYPES_H_

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace dialogue_games {

enum class DomainId { kMeeting, kFruit, kDebate };

std::string_view DomainName(DomainId domain);
// Throws Error(kUnknownDomain).
DomainId ParseDomainId(std::string_view name);

// The uninformative instruction every action menu must contain.
inline constexpr std::string_view kAnyLabel = "any";

// Per-player private information: an object of named fields such as
// fruit_endowment or available_days. Insertion order is kept for prompt
// rendering; canonical serialization sorts keys.
using PrivateInfo = nlohmann::ordered_json;

struct Scenario {
  std::string opening_message;
  std::string sender;
  std::string receiver;
  std::vector<PrivateInfo> private_info;  // Indexed by player.
};

struct GameConfig {
  int num_players = 2;
  std::vector<std::string> action_labels;
  int num_llm_seeds = 2;
  int num_max_replies = 1;
  double min_utility = 0.0;
  double max_utility = 1.0;
  DomainId domain_id = DomainId::kFruit;
  // Placeholders: {thread}, {private_info}, {action}, {sender}, {receiver}.
  // A line containing {action} is dropped when the instruction is "any".
  std::string header_template;
  // Title line of each message block in the rendered public thread.
  std::string message_title = "Message";
  Scenario scenario;
  std::vector<std::string> player_names;

  // Throws Error(kConfigInvalid) describing the first violated invariant.
  void Validate() const;

  // Decision plus chance node per reply.
  int MaxDepth() const { return 2 * num_players * num_max_replies; }
  int AnyActionIndex() const;
  // Index of the named player, or -1.
  int PlayerIndex(std::string_view name) const;
};

nlohmann::json ToJson(const GameConfig& config);
// Throws Error(kConfigInvalid) on missing or mistyped fields and
// Error(kUnknownDomain) on an unrecognized domain_id.
GameConfig GameConfigFromJson(const nlohmann::json& json);

// Sorted keys, shortest round-trip numbers, no whitespace.
std::string CanonicalJson(const nlohmann::ordered_json& value);
std::string CanonicalJson(const nlohmann::json& value);
std::string ConfigHash(const GameConfig& config);

// "fruit_endowment" -> "Fruit Endowment:" followed by one "key: value" line
// per entry; blocks separated by a blank line.
std::string RenderPrivateInfo(const PrivateInfo& info);

struct DecisionEvent {
  int player = 0;
  int action = 0;
  bool operator==(const DecisionEvent&) const = default;
};

struct ChanceEvent {
  int seed = 0;
  bool operator==(const ChanceEvent&) const = default;
};

struct MessageEvent {
  int author = 0;
  std::string text;
  bool operator==(const MessageEvent&) const = default;
};

using Event = std::variant<DecisionEvent, ChanceEvent, MessageEvent>;

// A history: the opening message followed by (Decision, Chance, Message)
// triples. Values are immutable once produced by DialogueGame.
struct DialogueState {
  std::vector<Event> events;
  std::vector<int> reply_counts;
  bool terminal = false;
  // Present iff terminal.
  std::optional<std::vector<double>> cached_returns;

  bool operator==(const DialogueState&) const = default;

  std::vector<MessageEvent> Messages() const;
  std::vector<DecisionEvent> Decisions() const;
  // Compact text form of every event; distinct histories give distinct text.
  std::string HistoryString() const;
};

struct InfostateKey {
  int player = 0;
  std::string public_thread;
  std::vector<int> own_actions;
  std::string own_private;

  bool operator==(const InfostateKey&) const = default;
  // Canonical text form; equal keys give equal strings and vice versa.
  std::string ToString() const;
};

std::string RenderThread(const GameConfig& config,
                         const std::vector<MessageEvent>& messages);

// Everything a reward model may look at once a dialogue has ended.
struct Transcript {
  std::vector<MessageEvent> messages;
  std::vector<DecisionEvent> decisions;
  std::string thread;
};

// {config_hash, events:[{kind, player?, action?, seed?, text?}], returns}
nlohmann::json TranscriptToJson(const GameConfig& config,
                                const DialogueState& state);

}  // namespace dialogue_games

#endif  // DIALOGUE_GAMES_GAME_TYPES_H_
