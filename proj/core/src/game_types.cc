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

#include "dialogue_games/game_types.h"

#include <cctype>
#include <cmath>
#include <set>

#include "dialogue_games/errors.h"
#include "dialogue_games/util.h"

namespace dialogue_games {
namespace {

using json = nlohmann::json;

constexpr std::string_view kThreadRule = "############################";

void Require(bool condition, const std::string& message) {
  if (!condition) throw Error(ErrorCode::kConfigInvalid, message);
}

// "fruit_endowment" -> "Fruit Endowment".
std::string TitleCase(std::string_view field) {
  std::string out;
  bool start = true;
  for (char c : field) {
    if (c == '_' || c == ' ') {
      out.push_back(' ');
      start = true;
    } else {
      out.push_back(start ? std::toupper(static_cast<unsigned char>(c)) : c);
      start = false;
    }
  }
  return out;
}

std::string ScalarText(const nlohmann::ordered_json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_float()) return FormatDouble(value.get<double>());
  return value.dump();
}

template <typename J>
J ReadField(const json& j, const char* name) {
  if (!j.contains(name)) {
    throw Error(ErrorCode::kConfigInvalid,
                std::string("missing field '") + name + "'");
  }
  try {
    return j.at(name).get<J>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kConfigInvalid,
                std::string("field '") + name + "': " + e.what());
  }
}

}  // namespace

std::string_view DomainName(DomainId domain) {
  switch (domain) {
    case DomainId::kMeeting:
      return "meeting";
    case DomainId::kFruit:
      return "fruit";
    case DomainId::kDebate:
      return "debate";
  }
  return "unknown";
}

DomainId ParseDomainId(std::string_view name) {
  std::string n = NormalizeLabel(name);
  if (n == "meeting") return DomainId::kMeeting;
  if (n == "fruit") return DomainId::kFruit;
  if (n == "debate") return DomainId::kDebate;
  throw Error(ErrorCode::kUnknownDomain, "unknown domain '" + n + "'");
}

void GameConfig::Validate() const {
  Require(num_players == 2, "num_players must be 2");
  Require(!action_labels.empty(), "action_labels is empty");
  std::set<std::string> seen;
  for (const auto& label : action_labels) {
    std::string n = NormalizeLabel(label);
    Require(!n.empty(), "empty action label");
    Require(seen.insert(n).second, "duplicate action label '" + n + "'");
  }
  Require(seen.count(std::string(kAnyLabel)) == 1,
          "action_labels must contain \"any\"");
  Require(num_llm_seeds >= 1, "num_llm_seeds must be >= 1");
  Require(num_max_replies >= 1, "num_max_replies must be >= 1");
  Require(std::isfinite(min_utility) && std::isfinite(max_utility) &&
              min_utility < max_utility,
          "need finite min_utility < max_utility");
  Require(!header_template.empty(), "header_template is empty");
  Require(static_cast<int>(player_names.size()) == num_players,
          "player_names must name every player");
  Require(player_names[0] != player_names[1], "player names must differ");
  Require(static_cast<int>(scenario.private_info.size()) == num_players,
          "scenario.private_info must cover every player");
  for (const auto& info : scenario.private_info) {
    Require(info.is_object(), "private_info entries must be objects");
  }
  Require(PlayerIndex(scenario.sender) >= 0,
          "scenario.sender is not a player");
  Require(PlayerIndex(scenario.receiver) >= 0,
          "scenario.receiver is not a player");
  Require(scenario.sender != scenario.receiver,
          "sender and receiver must differ");
}

int GameConfig::AnyActionIndex() const {
  for (size_t i = 0; i < action_labels.size(); ++i) {
    if (NormalizeLabel(action_labels[i]) == kAnyLabel) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

int GameConfig::PlayerIndex(std::string_view name) const {
  for (size_t i = 0; i < player_names.size(); ++i) {
    if (player_names[i] == name) return static_cast<int>(i);
  }
  return -1;
}

json ToJson(const GameConfig& config) {
  json scenario = {
      {"opening_message", config.scenario.opening_message},
      {"sender", config.scenario.sender},
      {"receiver", config.scenario.receiver},
      {"private_info", json::array()},
  };
  for (const auto& info : config.scenario.private_info) {
    scenario["private_info"].push_back(json::parse(info.dump()));
  }
  return {
      {"num_players", config.num_players},
      {"action_labels", config.action_labels},
      {"num_llm_seeds", config.num_llm_seeds},
      {"num_max_replies", config.num_max_replies},
      {"min_utility", config.min_utility},
      {"max_utility", config.max_utility},
      {"domain_id", DomainName(config.domain_id)},
      {"header_template", config.header_template},
      {"message_title", config.message_title},
      {"scenario", scenario},
      {"player_names", config.player_names},
  };
}

GameConfig GameConfigFromJson(const json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kConfigInvalid, "config must be a JSON object");
  }
  GameConfig config;
  config.num_players = j.value("num_players", 2);
  config.action_labels =
      ReadField<std::vector<std::string>>(j, "action_labels");
  config.num_llm_seeds = j.value("num_llm_seeds", 2);
  config.num_max_replies = j.value("num_max_replies", 1);
  config.min_utility = ReadField<double>(j, "min_utility");
  config.max_utility = ReadField<double>(j, "max_utility");
  config.domain_id = ParseDomainId(ReadField<std::string>(j, "domain_id"));
  config.header_template = ReadField<std::string>(j, "header_template");
  config.message_title = j.value("message_title", std::string("Message"));
  config.player_names = ReadField<std::vector<std::string>>(j, "player_names");
  json scenario = ReadField<json>(j, "scenario");
  config.scenario.opening_message =
      ReadField<std::string>(scenario, "opening_message");
  config.scenario.sender = ReadField<std::string>(scenario, "sender");
  config.scenario.receiver = ReadField<std::string>(scenario, "receiver");
  // Reparse from text so the ordered representation keeps the file's order.
  auto ordered = nlohmann::ordered_json::parse(
      ReadField<json>(scenario, "private_info").dump());
  if (!ordered.is_array()) {
    throw Error(ErrorCode::kConfigInvalid, "private_info must be an array");
  }
  for (auto& info : ordered) config.scenario.private_info.push_back(info);
  config.Validate();
  return config;
}

std::string CanonicalJson(const nlohmann::ordered_json& value) {
  return CanonicalJson(json::parse(value.dump()));
}

namespace {

// Integral doubles print as integers ("3", not "3.0").
json ShortestNumbers(const json& value) {
  if (value.is_number_float()) {
    const double x = value.get<double>();
    if (std::isfinite(x) && std::trunc(x) == x && std::abs(x) < 0x1p53) {
      return json(static_cast<int64_t>(x));
    }
    return value;
  }
  if (value.is_structured()) {
    json out = value;
    for (auto& item : out) item = ShortestNumbers(item);
    return out;
  }
  return value;
}

}  // namespace

std::string CanonicalJson(const json& value) {
  // json keeps object keys sorted; dump() prints the shortest round-trip
  // form of every remaining double.
  return ShortestNumbers(value).dump();
}

std::string ConfigHash(const GameConfig& config) {
  return HexHash(Hash64(CanonicalJson(ToJson(config))));
}

std::string RenderPrivateInfo(const PrivateInfo& info) {
  std::string out;
  for (const auto& [field, value] : info.items()) {
    if (!out.empty()) out += "\n\n";
    out += TitleCase(field) + ":";
    if (value.is_object()) {
      for (const auto& [k, v] : value.items()) {
        out += "\n" + k + ": " + ScalarText(v);
      }
    } else if (value.is_array()) {
      for (const auto& item : value) out += "\n" + ScalarText(item);
    } else {
      out += " " + ScalarText(value);
    }
  }
  return out;
}

std::vector<MessageEvent> DialogueState::Messages() const {
  std::vector<MessageEvent> out;
  for (const auto& e : events) {
    if (const auto* m = std::get_if<MessageEvent>(&e)) out.push_back(*m);
  }
  return out;
}

std::vector<DecisionEvent> DialogueState::Decisions() const {
  std::vector<DecisionEvent> out;
  for (const auto& e : events) {
    if (const auto* d = std::get_if<DecisionEvent>(&e)) out.push_back(*d);
  }
  return out;
}

std::string DialogueState::HistoryString() const {
  std::string out;
  for (const auto& e : events) {
    if (const auto* d = std::get_if<DecisionEvent>(&e)) {
      out += "D" + std::to_string(d->player) + ":" +
             std::to_string(d->action) + "|";
    } else if (const auto* c = std::get_if<ChanceEvent>(&e)) {
      out += "C" + std::to_string(c->seed) + "|";
    } else {
      const auto& m = std::get<MessageEvent>(e);
      // Length prefix keeps the encoding injective for arbitrary text.
      out += "M" + std::to_string(m.author) + ":" +
             std::to_string(m.text.size()) + ":" + m.text + "|";
    }
  }
  return out;
}

std::string InfostateKey::ToString() const {
  json j = {{"player", player},
            {"public_thread", public_thread},
            {"own_actions", own_actions},
            {"own_private", own_private}};
  return j.dump();
}

std::string RenderThread(const GameConfig& config,
                         const std::vector<MessageEvent>& messages) {
  std::string out;
  for (const auto& m : messages) {
    if (!out.empty()) out += "\n\n";
    const int n = static_cast<int>(config.player_names.size());
    const std::string& from = config.player_names.at(m.author);
    const std::string& to = config.player_names.at((m.author + 1) % n);
    out += std::string(kThreadRule) + "\n" + config.message_title +
           ":\nfrom: " + from + "\nto: " + to + "\n" +
           std::string(kThreadRule) + "\n\n" + m.text;
  }
  return out;
}

json TranscriptToJson(const GameConfig& config, const DialogueState& state) {
  json events = json::array();
  for (const auto& e : state.events) {
    if (const auto* d = std::get_if<DecisionEvent>(&e)) {
      events.push_back(
          {{"kind", "decision"}, {"player", d->player}, {"action", d->action}});
    } else if (const auto* c = std::get_if<ChanceEvent>(&e)) {
      events.push_back({{"kind", "chance"}, {"seed", c->seed}});
    } else {
      const auto& m = std::get<MessageEvent>(e);
      events.push_back(
          {{"kind", "message"}, {"player", m.author}, {"text", m.text}});
    }
  }
  json out = {{"config_hash", ConfigHash(config)}, {"events", events}};
  out["returns"] = state.cached_returns ? json(*state.cached_returns) : json();
  return out;
}

}  // namespace dialogue_games
