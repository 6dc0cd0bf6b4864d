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

#include "dialogue_games/stub_backends.h"

#include <algorithm>
#include <cctype>

#include "dialogue_games/assets.h"
#include "dialogue_games/domains.h"
#include "dialogue_games/errors.h"
#include "dialogue_games/util.h"

namespace dialogue_games {
namespace {

constexpr std::string_view kMarkerOpen = "[[action:";
constexpr std::string_view kMarkerClose = "]]";

std::vector<double> OneHotOrUniform(std::string_view label,
                                    std::span<const std::string> labels) {
  std::vector<double> probs(labels.size(), 0.0);
  const std::string wanted = NormalizeLabel(label);
  if (!wanted.empty()) {
    for (size_t i = 0; i < labels.size(); ++i) {
      if (NormalizeLabel(labels[i]) == wanted) {
        probs[i] = 1.0;
        return probs;
      }
    }
  }
  std::fill(probs.begin(), probs.end(), 1.0 / labels.size());
  return probs;
}

std::string Capitalize(std::string text) {
  if (!text.empty()) {
    text[0] = std::toupper(static_cast<unsigned char>(text[0]));
  }
  return text;
}

bool IsDay(std::string_view label) {
  const std::string n = NormalizeLabel(label);
  return std::find(kDays.begin(), kDays.end(), n) != kDays.end();
}

}  // namespace

std::string ActionMarker(std::string_view label) {
  return std::string(kMarkerOpen) + std::string(label) +
         std::string(kMarkerClose);
}

std::string FindActionMarker(std::string_view text) {
  const size_t open = text.rfind(kMarkerOpen);
  if (open == std::string_view::npos) return "";
  const size_t start = open + kMarkerOpen.size();
  const size_t close = text.find(kMarkerClose, start);
  if (close == std::string_view::npos) return "";
  return std::string(text.substr(start, close - start));
}

StubProfile StubProfile::Default(double follow_rate) {
  StubProfile profile;
  profile.follow_rate = follow_rate;
  const auto bank = nlohmann::json::parse(Asset("stub_messages.json"));
  for (const auto& [domain, bodies] : bank.items()) {
    profile.message_bank[ParseDomainId(domain)] =
        bodies.get<std::vector<std::string>>();
  }
  profile.Validate();
  return profile;
}

void StubProfile::Validate() const {
  if (!(follow_rate >= 0.0 && follow_rate <= 1.0)) {
    throw Error(ErrorCode::kConfigInvalid, "follow_rate must be in [0, 1]");
  }
  for (DomainId d : {DomainId::kMeeting, DomainId::kFruit, DomainId::kDebate}) {
    auto it = message_bank.find(d);
    if (it == message_bank.end() || it->second.empty()) {
      throw Error(ErrorCode::kConfigInvalid,
                  "stub message bank has no bodies for " +
                      std::string(DomainName(d)));
    }
  }
}

StubGenerator::StubGenerator(StubProfile profile)
    : profile_(std::move(profile)) {
  profile_.Validate();
}

std::string StubGenerator::ExpressedLabel(
    const GenerationRequest& request) const {
  const uint64_t h = Hash64(request.prompt, request.seed);
  const auto& ctx = request.context;
  const bool follow = HashToUnit(MixHash(h, 1)) < profile_.follow_rate;
  std::vector<std::string> others;
  const std::string instructed = NormalizeLabel(ctx.action_label);
  for (const auto& label : ctx.action_labels) {
    if (NormalizeLabel(label) != instructed) others.push_back(label);
  }
  if (follow || others.empty()) return ctx.action_label;
  return others[MixHash(h, 2) % others.size()];
}

std::string StubGenerator::Generate(const GenerationRequest& request) {
  const uint64_t h = Hash64(request.prompt, request.seed);
  const auto& ctx = request.context;
  const std::string expressed = ExpressedLabel(request);
  const auto& bank = profile_.message_bank.at(ctx.domain);
  std::string body = bank[MixHash(h, 3) % bank.size()];

  const int n1 = 1 + static_cast<int>(MixHash(h, 4) % 3);
  const int n2 = 1 + static_cast<int>(MixHash(h, 6) % 3);
  const size_t f1 = MixHash(h, 5) % kFruits.size();
  const size_t f2 = (f1 + 1 + MixHash(h, 7) % (kFruits.size() - 1)) %
                    kFruits.size();
  const std::string day = IsDay(expressed)
                              ? NormalizeLabel(expressed)
                              : std::string(kDays[MixHash(h, 8) % 7]);

  body = ReplaceAll(body, "{sender}", ctx.sender);
  body = ReplaceAll(body, "{receiver}", ctx.receiver);
  body = ReplaceAll(body, "{n1}", std::to_string(n1));
  body = ReplaceAll(body, "{f1}", PluralFruit(kFruits[f1], n1));
  body = ReplaceAll(body, "{n2}", std::to_string(n2));
  body = ReplaceAll(body, "{f2}", PluralFruit(kFruits[f2], n2));
  body = ReplaceAll(body, "{day}", Capitalize(day));
  body = ReplaceAll(body, "{label}", expressed);
  return body + " " + ActionMarker(expressed);
}

std::vector<double> StubClassifier::Classify(
    std::string_view message, std::span<const std::string> labels) {
  return OneHotOrUniform(FindActionMarker(message), labels);
}

bool RuleTerminator::IsTerminal(const Transcript& transcript,
                                const GameConfig& config) {
  if (config.domain_id == DomainId::kDebate || transcript.messages.empty()) {
    return false;
  }
  const std::string& last = transcript.messages.back().text;
  return IsAcceptance(config.domain_id, last) ||
         IsRejection(config.domain_id, last);
}

ScriptedGenerator::ScriptedGenerator(std::vector<std::string> fallback)
    : fallback_(std::move(fallback)) {}

std::unique_ptr<ScriptedGenerator> ScriptedGenerator::FromJson(
    const nlohmann::json& fixture) {
  try {
    auto gen = std::make_unique<ScriptedGenerator>(
        fixture.value("fallback", std::vector<std::string>{}));
    for (const auto& r : fixture.value("responses", nlohmann::json::array())) {
      gen->responses_[{r.at("prompt_hash").get<std::string>(),
                       r.at("seed").get<int>()}] =
          r.at("text").get<std::string>();
    }
    return gen;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigInvalid,
                std::string("scripted generator fixture: ") + e.what());
  }
}

void ScriptedGenerator::AddResponse(std::string_view prompt, int seed,
                                    std::string text) {
  responses_[{HexHash(Hash64(prompt)), seed}] = std::move(text);
}

std::string ScriptedGenerator::Generate(const GenerationRequest& request) {
  auto it = responses_.find({HexHash(Hash64(request.prompt)), request.seed});
  if (it != responses_.end()) return it->second;
  if (fallback_.empty()) {
    throw Error(ErrorCode::kBackendFailure,
                "no scripted response for prompt " +
                    HexHash(Hash64(request.prompt)) + " seed " +
                    std::to_string(request.seed));
  }
  return fallback_[Hash64(request.prompt, request.seed) % fallback_.size()];
}

ScriptedClassifier::ScriptedClassifier(
    std::map<std::string, std::string> answers)
    : answers_(std::move(answers)) {}

std::unique_ptr<ScriptedClassifier> ScriptedClassifier::FromJson(
    const nlohmann::json& fixture) {
  try {
    return std::make_unique<ScriptedClassifier>(
        fixture.value("answers", std::map<std::string, std::string>{}));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigInvalid,
                std::string("scripted classifier fixture: ") + e.what());
  }
}

std::vector<double> ScriptedClassifier::Classify(
    std::string_view message, std::span<const std::string> labels) {
  auto it = answers_.find(HexHash(Hash64(message)));
  return OneHotOrUniform(it == answers_.end() ? "" : it->second, labels);
}

PayoffTableReward::PayoffTableReward(Table table) : table_(std::move(table)) {}

RewardJudgment PayoffTableReward::Score(const Transcript& transcript,
                                        const GameConfig& config) {
  std::vector<std::string> key(config.num_players);
  for (const auto& d : transcript.decisions) {
    std::string& k = key.at(d.player);
    if (!k.empty()) k += ",";
    k += config.action_labels.at(d.action);
  }
  auto it = table_.find(key);
  if (it == table_.end()) {
    std::string joined;
    for (const auto& k : key) joined += "[" + k + "]";
    throw Error(ErrorCode::kBackendFailure, "payoff table has no entry for " +
                                                joined);
  }
  RewardJudgment judgment;
  judgment.values = it->second;
  judgment.outcome = OutcomeTag::kValid;
  return judgment;
}

HashedReward::HashedReward(uint64_t salt, double low, double high)
    : salt_(salt), low_(low), high_(high) {}

RewardJudgment HashedReward::Score(const Transcript& transcript,
                                   const GameConfig& config) {
  std::string history;
  for (const auto& d : transcript.decisions) {
    history += std::to_string(d.player) + ":" + std::to_string(d.action) + ";";
  }
  history += "|" + transcript.thread;
  const uint64_t h = Hash64(history, salt_);
  RewardJudgment judgment;
  for (int p = 0; p < config.num_players; ++p) {
    judgment.values.push_back(low_ +
                              (high_ - low_) * HashToUnit(MixHash(h, p + 1)));
  }
  judgment.outcome = OutcomeTag::kValid;
  return judgment;
}

CachingGenerator::CachingGenerator(std::shared_ptr<TextGenerator> inner)
    : inner_(std::move(inner)) {}

std::string CachingGenerator::Generate(const GenerationRequest& request) {
  // The stub reads the structured context, so it is part of the key.
  std::string key = std::to_string(request.seed) + '\x1f' +
                    std::string(DomainName(request.context.domain)) + '\x1f' +
                    request.context.action_label + '\x1f';
  for (const auto& l : request.context.action_labels) key += l + '\x1e';
  key += '\x1f' + request.context.sender + '\x1f' +
         request.context.receiver + '\x1f' + request.prompt;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  std::string text = inner_->Generate(request);
  backend_calls_.fetch_add(1);
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.emplace(key, std::move(text)).first->second;
}

BackendBundle MakeStubBundle(double follow_rate) {
  BackendBundle bundle;
  bundle.generator = std::make_shared<StubGenerator>(
      StubProfile::Default(follow_rate));
  bundle.classifier = std::make_shared<StubClassifier>();
  bundle.terminator = std::make_shared<RuleTerminator>();
  bundle.reward = std::make_shared<OracleRewardModel>();
  return bundle;
}

EmbeddedMatrixGame MakeEmbeddedMatrixGame(
    const std::vector<std::string>& labels,
    const std::vector<std::vector<double>>& row,
    const std::vector<std::vector<double>>& col) {
  const size_t n = labels.size();
  auto square = [n](const std::vector<std::vector<double>>& m) {
    return m.size() == n &&
           std::all_of(m.begin(), m.end(),
                       [n](const auto& r) { return r.size() == n; });
  };
  if (n == 0 || !square(row) || !square(col)) {
    throw Error(ErrorCode::kShapeMismatch,
                "payoff matrices must be labels x labels");
  }
  std::vector<std::string> menu = labels;
  menu.emplace_back(kAnyLabel);
  // Index n is "any": the average over the instruction labels.
  auto extended = [n](const std::vector<std::vector<double>>& m, int i,
                      int j) {
    double total = 0.0;
    int count = 0;
    for (size_t a = 0; a < n; ++a) {
      for (size_t b = 0; b < n; ++b) {
        if ((i == static_cast<int>(n) || static_cast<int>(a) == i) &&
            (j == static_cast<int>(n) || static_cast<int>(b) == j)) {
          total += m[a][b];
          ++count;
        }
      }
    }
    return total / count;
  };
  PayoffTableReward::Table table;
  double low = row[0][0], high = row[0][0];
  for (size_t i = 0; i <= n; ++i) {
    for (size_t j = 0; j <= n; ++j) {
      const double r = extended(row, i, j), c = extended(col, i, j);
      table[{menu[i], menu[j]}] = {r, c};
      low = std::min({low, r, c});
      high = std::max({high, r, c});
    }
  }
  if (low == high) high = low + 1.0;

  EmbeddedMatrixGame game;
  GameConfig& config = game.config;
  config.action_labels = menu;
  config.num_llm_seeds = 1;
  config.num_max_replies = 1;
  config.min_utility = low;
  config.max_utility = high;
  config.domain_id = DomainId::kDebate;
  config.header_template =
      "You are {sender}, writing to {receiver}.\n\n{thread}\n\n"
      "Reply in a {action} way.";
  config.player_names = {"Row", "Column"};
  config.scenario.sender = "Column";
  config.scenario.receiver = "Row";
  config.scenario.opening_message = "Your move.";
  config.scenario.private_info = {PrivateInfo::object(),
                                  PrivateInfo::object()};
  config.Validate();
  game.backends.generator =
      std::make_shared<ScriptedGenerator>(std::vector<std::string>{"Done."});
  game.backends.classifier = std::make_shared<StubClassifier>();
  game.backends.terminator = std::make_shared<DepthCapTerminator>();
  game.backends.reward = std::make_shared<PayoffTableReward>(std::move(table));
  return game;
}

EmbeddedMatrixGame MatchingPennies() {
  return MakeEmbeddedMatrixGame({"heads", "tails"}, {{1, -1}, {-1, 1}},
                                {{-1, 1}, {1, -1}});
}

EmbeddedMatrixGame RockPaperScissors() {
  const std::vector<std::vector<double>> row = {
      {0, -1, 1}, {1, 0, -1}, {-1, 1, 0}};
  std::vector<std::vector<double>> col = row;
  for (auto& r : col) {
    for (double& v : r) v = -v;
  }
  return MakeEmbeddedMatrixGame({"rock", "paper", "scissors"}, row, col);
}

}  // namespace dialogue_games
