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

#include "dialogue_games/dialogue_game.h"

#include <algorithm>
#include <mutex>

#include "dialogue_games/errors.h"
#include "dialogue_games/util.h"

namespace dialogue_games {
namespace {

// Substitutes {name} placeholders; "{{" and "}}" stand for literal braces.
std::string FillTemplate(
    std::string_view tmpl,
    const std::vector<std::pair<std::string_view, std::string>>& values) {
  std::string out;
  for (size_t i = 0; i < tmpl.size(); ++i) {
    const char c = tmpl[i];
    if (c == '{' && i + 1 < tmpl.size() && tmpl[i + 1] == '{') {
      out.push_back('{');
      ++i;
    } else if (c == '}' && i + 1 < tmpl.size() && tmpl[i + 1] == '}') {
      out.push_back('}');
      ++i;
    } else if (c == '{') {
      const size_t close = tmpl.find('}', i);
      if (close == std::string_view::npos) {
        throw Error(ErrorCode::kTemplateError, "unterminated placeholder");
      }
      const std::string_view name = tmpl.substr(i + 1, close - i - 1);
      auto it = std::find_if(values.begin(), values.end(),
                             [&](const auto& kv) { return kv.first == name; });
      if (it == values.end()) {
        throw Error(ErrorCode::kTemplateError,
                    "unknown placeholder {" + std::string(name) + "}");
      }
      out += it->second;
      i = close;
    } else {
      out.push_back(c);
    }
  }
  return out;
}

// Removes every line mentioning {action}, together with one blank line that
// separated it from the following block.
std::string DropActionLines(std::string_view tmpl) {
  std::vector<std::string> lines = SplitLines(tmpl);
  std::vector<std::string> kept;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].find("{action}") != std::string::npos) {
      if (i + 1 < lines.size() && Trim(lines[i + 1]).empty()) ++i;
      continue;
    }
    kept.push_back(lines[i]);
  }
  std::string out;
  for (size_t i = 0; i < kept.size(); ++i) {
    if (i) out.push_back('\n');
    out += kept[i];
  }
  return out;
}

}  // namespace

std::string RenderGenerationPrompt(const GameConfig& config,
                                   const std::vector<MessageEvent>& messages,
                                   int player, int action_index) {
  const std::string& label = config.action_labels.at(action_index);
  const bool any = NormalizeLabel(label) == kAnyLabel;
  const std::string tmpl =
      any ? DropActionLines(config.header_template) : config.header_template;
  std::string prompt = FillTemplate(
      tmpl, {{"thread", RenderThread(config, messages)},
             {"private_info",
              RenderPrivateInfo(config.scenario.private_info.at(player))},
             {"action", label},
             {"sender", config.player_names.at(player)},
             {"receiver",
              config.player_names.at((player + 1) % config.num_players)}});
  // An empty thread would otherwise leave the prompt opening on blank lines.
  const size_t first = prompt.find_first_not_of('\n');
  return first == std::string::npos ? "" : prompt.substr(first);
}

DialogueGame::DialogueGame(GameConfig config, BackendBundle backends)
    : config_(std::move(config)), backends_(std::move(backends)) {
  config_.Validate();
  if (!backends_.generator || !backends_.reward) {
    throw Error(ErrorCode::kConfigInvalid,
                "a game needs generation and reward backends");
  }
  opening_author_ = config_.PlayerIndex(config_.scenario.sender);
}

DialogueState DialogueGame::NewInitialState() const {
  DialogueState state;
  state.events.push_back(
      MessageEvent{opening_author_, config_.scenario.opening_message});
  state.reply_counts.assign(config_.num_players, 0);
  return state;
}

int DialogueGame::NextMover(const DialogueState& state) const {
  for (auto it = state.events.rbegin(); it != state.events.rend(); ++it) {
    if (const auto* m = std::get_if<MessageEvent>(&*it)) {
      return (m->author + 1) % config_.num_players;
    }
  }
  return (opening_author_ + 1) % config_.num_players;
}

NodeKind DialogueGame::Kind(const DialogueState& state) const {
  if (state.terminal) return {NodeKind::kTerminal, -1};
  if (!state.events.empty() &&
      std::holds_alternative<DecisionEvent>(state.events.back())) {
    return {NodeKind::kChance, -1};
  }
  return {NodeKind::kDecision, NextMover(state)};
}

std::vector<int> DialogueGame::LegalActions(const DialogueState& state) const {
  if (Kind(state).type != NodeKind::kDecision) {
    throw Error(ErrorCode::kWrongNodeKind, "legal actions need a decision node");
  }
  std::vector<int> actions(num_actions());
  for (int a = 0; a < num_actions(); ++a) actions[a] = a;
  return actions;
}

std::vector<std::pair<int, double>> DialogueGame::ChanceOutcomes(
    const DialogueState& state) const {
  if (Kind(state).type != NodeKind::kChance) {
    throw Error(ErrorCode::kWrongNodeKind, "chance outcomes need a chance node");
  }
  std::vector<std::pair<int, double>> outcomes;
  const double p = 1.0 / config_.num_llm_seeds;
  for (int s = 0; s < config_.num_llm_seeds; ++s) outcomes.emplace_back(s, p);
  return outcomes;
}

std::string DialogueGame::FormatPrompt(const DialogueState& state, int player,
                                       int action_index) const {
  const NodeKind kind = Kind(state);
  if (kind.type != NodeKind::kDecision) {
    throw Error(ErrorCode::kWrongNodeKind, "prompts are formatted at decisions");
  }
  if (player < 0 || player >= config_.num_players) {
    throw Error(ErrorCode::kIllegalAction, "no such player");
  }
  if (action_index < 0 || action_index >= num_actions()) {
    throw Error(ErrorCode::kIllegalAction,
                "action " + std::to_string(action_index) + " out of range");
  }
  return RenderGenerationPrompt(config_, state.Messages(), player,
                                action_index);
}

DialogueState DialogueGame::ApplyAction(const DialogueState& state,
                                        int action_or_seed) const {
  const NodeKind kind = Kind(state);
  if (kind.type == NodeKind::kTerminal) {
    throw Error(ErrorCode::kWrongNodeKind, "cannot act at a terminal state");
  }
  DialogueState child = state;
  if (kind.type == NodeKind::kDecision) {
    if (action_or_seed < 0 || action_or_seed >= num_actions()) {
      throw Error(ErrorCode::kIllegalAction,
                  "action " + std::to_string(action_or_seed) +
                      " is not legal");
    }
    child.events.push_back(DecisionEvent{kind.player, action_or_seed});
    return child;
  }

  if (action_or_seed < 0 || action_or_seed >= config_.num_llm_seeds) {
    throw Error(ErrorCode::kIllegalAction,
                "seed " + std::to_string(action_or_seed) + " is not legal");
  }
  const auto& decision = std::get<DecisionEvent>(state.events.back());
  const int mover = decision.player;
  const int seed = action_or_seed;
  const std::string key =
      GetInfostateKey(state, mover).ToString() + "#" + std::to_string(seed);

  child.events.push_back(ChanceEvent{seed});
  child.reply_counts.at(mover) += 1;
  const int next = (mover + 1) % config_.num_players;
  const bool capped = child.reply_counts[next] >= config_.num_max_replies;

  Transition transition;
  bool found = false;
  {
    std::shared_lock lock(mu_);
    auto it = transitions_.find(key);
    if (it != transitions_.end()) {
      transition = it->second;
      found = true;
    }
  }
  if (!found) {
    const std::vector<MessageEvent> messages = state.Messages();
    GenerationRequest request;
    request.prompt =
        RenderGenerationPrompt(config_, messages, mover, decision.action);
    request.seed = seed;
    request.context.domain = config_.domain_id;
    request.context.action_label = config_.action_labels[decision.action];
    request.context.action_labels = config_.action_labels;
    request.context.sender = config_.player_names.at(mover);
    request.context.receiver = config_.player_names.at(next);
    try {
      transition.text = backends_.generator->Generate(request);
      generation_calls_.fetch_add(1);
      if (!capped && backends_.terminator) {
        DialogueState probe = child;
        probe.events.push_back(MessageEvent{mover, transition.text});
        judge_calls_.fetch_add(1);
        transition.judged_terminal =
            backends_.terminator->IsTerminal(MakeTranscript(probe), config_);
      }
    } catch (const std::exception& e) {
      throw Error(ErrorCode::kBackendFailure,
                  "transition (player " + std::to_string(mover) + ", action " +
                      config_.action_labels[decision.action] + ", seed " +
                      std::to_string(seed) + ", history " +
                      HexHash(Hash64(state.HistoryString())) +
                      ") failed: " + e.what());
    }
    std::unique_lock lock(mu_);
    transition = transitions_.emplace(key, transition).first->second;
  }

  child.events.push_back(MessageEvent{mover, transition.text});
  if (capped || transition.judged_terminal) {
    child.terminal = true;
    child.cached_returns = ComputeReturns(child);
  }
  return child;
}

std::vector<double> DialogueGame::ComputeReturns(
    const DialogueState& state) const {
  const Transcript transcript = MakeTranscript(state);
  const std::string key = backends_.reward->UsesDecisions()
                              ? state.HistoryString()
                              : transcript.thread;
  {
    std::shared_lock lock(mu_);
    auto it = rewards_.find(key);
    if (it != rewards_.end()) return it->second;
  }
  RewardJudgment judgment;
  try {
    judgment = backends_.reward->Score(transcript, config_);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kBackendFailure) throw;
    throw Error(ErrorCode::kBackendFailure,
                std::string("reward model failed: ") + e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorCode::kBackendFailure,
                std::string("reward model failed: ") + e.what());
  }
  reward_calls_.fetch_add(1);
  if (static_cast<int>(judgment.values.size()) != config_.num_players) {
    throw Error(ErrorCode::kBackendFailure,
                "reward model returned " +
                    std::to_string(judgment.values.size()) + " values");
  }
  for (double& v : judgment.values) {
    v = std::clamp(v, config_.min_utility, config_.max_utility);
  }
  std::unique_lock lock(mu_);
  return rewards_.emplace(key, judgment.values).first->second;
}

std::vector<double> DialogueGame::Returns(const DialogueState& state) const {
  if (!state.terminal) {
    throw Error(ErrorCode::kNotTerminal, "returns need a terminal state");
  }
  if (state.cached_returns) return *state.cached_returns;
  return ComputeReturns(state);
}

InfostateKey DialogueGame::GetInfostateKey(const DialogueState& state,
                                           int player) const {
  InfostateKey key;
  key.player = player;
  key.public_thread = RenderThread(config_, state.Messages());
  for (const auto& d : state.Decisions()) {
    if (d.player == player) key.own_actions.push_back(d.action);
  }
  key.own_private = CanonicalJson(config_.scenario.private_info.at(player));
  return key;
}

Transcript DialogueGame::MakeTranscript(const DialogueState& state) const {
  Transcript t;
  t.messages = state.Messages();
  t.decisions = state.Decisions();
  t.thread = RenderThread(config_, t.messages);
  return t;
}

GameStats DialogueGame::stats() const {
  GameStats s;
  s.generation_calls = generation_calls_.load();
  s.judge_calls = judge_calls_.load();
  s.reward_calls = reward_calls_.load();
  std::shared_lock lock(mu_);
  s.distinct_transitions = static_cast<int64_t>(transitions_.size());
  s.distinct_reward_keys = static_cast<int64_t>(rewards_.size());
  return s;
}

}  // namespace dialogue_games
