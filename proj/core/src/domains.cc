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

#include "dialogue_games/domains.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <regex>
#include <set>

#include "dialogue_games/assets.h"
#include "dialogue_games/errors.h"
#include "dialogue_games/util.h"

namespace dialogue_games {
namespace {

using ojson = nlohmann::ordered_json;

const std::vector<std::string>& AssetLines(std::string_view name) {
  // Only called with the two list assets; each gets its own static.
  static const auto* names = new std::vector<std::string>([] {
    std::vector<std::string> out;
    for (auto& line : SplitLines(Asset("names.txt"))) {
      if (!Trim(line).empty()) out.push_back(Trim(line));
    }
    return out;
  }());
  static const auto* topics = new std::vector<std::string>([] {
    std::vector<std::string> out;
    for (auto& line : SplitLines(Asset("debate_topics.txt"))) {
      if (!Trim(line).empty()) out.push_back(Trim(line));
    }
    return out;
  }());
  return name == "names.txt" ? *names : *topics;
}

std::string Capitalize(std::string text) {
  if (!text.empty()) {
    text[0] = std::toupper(static_cast<unsigned char>(text[0]));
  }
  return text;
}

// Whitespace-collapsed lowercase text; phrase lists match against this.
std::string Normalize(std::string_view text) {
  return ToLower(CollapseWhitespace(text));
}

bool ContainsAny(const std::string& text,
                 std::initializer_list<std::string_view> phrases) {
  for (auto p : phrases) {
    if (text.find(p) != std::string::npos) return true;
  }
  return false;
}

ojson IntOrDouble(double v) {
  if (std::floor(v) == v && std::abs(v) < 1e15) {
    return ojson(static_cast<int64_t>(v));
  }
  return ojson(v);
}

const ojson& Field(const Scenario& scenario, int player,
                   const char* name) {
  const auto& info = scenario.private_info.at(player);
  if (!info.is_object() || !info.contains(name)) {
    throw Error(ErrorCode::kConfigInvalid,
                std::string("private_info is missing '") + name + "'");
  }
  return info.at(name);
}

void CheckPlayers(const Scenario& scenario) {
  if (scenario.private_info.size() != 2) {
    throw Error(ErrorCode::kConfigInvalid,
                "scenario needs private_info for two players");
  }
}

int ParseCount(const std::string& token) {
  static const std::map<std::string, int> kWords = {
      {"a", 1},    {"an", 1},    {"one", 1},   {"two", 2},
      {"three", 3}, {"four", 4}, {"five", 5},  {"six", 6},
      {"seven", 7}, {"eight", 8}, {"nine", 9}, {"ten", 10}};
  auto it = kWords.find(token);
  if (it != kWords.end()) return it->second;
  return std::stoi(token);
}

std::string SingularFruit(const std::string& word) {
  if (word == "blueberries") return "blueberry";
  if (word.back() == 's') return word.substr(0, word.size() - 1);
  return word;
}

std::string DayIn(const std::string& normalized_text) {
  // Last day name mentioned.
  static const std::regex kDay(
      R"(\b(monday|tuesday|wednesday|thursday|friday|saturday|sunday)\b)");
  std::string day;
  for (auto it = std::sregex_iterator(normalized_text.begin(),
                                      normalized_text.end(), kDay);
       it != std::sregex_iterator(); ++it) {
    day = (*it)[1];
  }
  return day;
}

}  // namespace

std::string PluralFruit(std::string_view fruit, int count) {
  std::string f(fruit);
  if (count == 1) return f;
  if (f == "blueberry") return "blueberries";
  return f + "s";
}

void FruitScenario::Validate() const {
  for (int p = 0; p < 2; ++p) {
    for (auto fruit : kFruits) {
      auto e = endowment[p].find(std::string(fruit));
      auto v = valuations[p].find(std::string(fruit));
      if (e == endowment[p].end() || v == valuations[p].end()) {
        throw Error(ErrorCode::kConfigInvalid,
                    "fruit scenario is missing " + std::string(fruit));
      }
      if (e->second < 0 || !(v->second >= 0.0)) {
        throw Error(ErrorCode::kConfigInvalid,
                    "negative count or valuation for " + std::string(fruit));
      }
    }
  }
}

FruitScenario FruitScenario::FromScenario(const Scenario& scenario) {
  CheckPlayers(scenario);
  FruitScenario out;
  try {
    for (int p = 0; p < 2; ++p) {
      for (const auto& [k, v] :
           Field(scenario, p, "fruit_endowment").items()) {
        out.endowment[p][k] = v.get<int>();
      }
      for (const auto& [k, v] :
           Field(scenario, p, "fruit_valuations").items()) {
        out.valuations[p][k] = v.get<double>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigInvalid,
                std::string("fruit private_info: ") + e.what());
  }
  out.Validate();
  return out;
}

void FruitScenario::WriteTo(Scenario& scenario) const {
  scenario.private_info.resize(2);
  for (int p = 0; p < 2; ++p) {
    ojson endow = ojson::object(), values = ojson::object();
    for (auto fruit : kFruits) {
      endow[std::string(fruit)] = endowment[p].at(std::string(fruit));
      values[std::string(fruit)] =
          IntOrDouble(valuations[p].at(std::string(fruit)));
    }
    auto& info = scenario.private_info[p];
    if (!info.is_object()) info = ojson::object();
    info["fruit_endowment"] = endow;
    info["fruit_valuations"] = values;
  }
}

void MeetingScenario::Validate() const {
  for (int p = 0; p < 2; ++p) {
    if (available_days[p].empty()) {
      throw Error(ErrorCode::kConfigInvalid, "available_days is empty");
    }
    for (const auto& d : available_days[p]) {
      if (std::find(kDays.begin(), kDays.end(), d) == kDays.end()) {
        throw Error(ErrorCode::kConfigInvalid, "unknown day '" + d + "'");
      }
    }
    for (auto day : kDays) {
      auto it = day_values[p].find(std::string(day));
      if (it == day_values[p].end() || !(it->second >= 0.0)) {
        throw Error(ErrorCode::kConfigInvalid,
                    "missing or negative value for " + std::string(day));
      }
    }
  }
}

MeetingScenario MeetingScenario::FromScenario(const Scenario& scenario) {
  CheckPlayers(scenario);
  MeetingScenario out;
  try {
    for (int p = 0; p < 2; ++p) {
      for (const auto& d : Field(scenario, p, "available_days")) {
        out.available_days[p].push_back(NormalizeLabel(d.get<std::string>()));
      }
      for (const auto& [k, v] : Field(scenario, p, "day_values").items()) {
        out.day_values[p][NormalizeLabel(k)] = v.get<double>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigInvalid,
                std::string("meeting private_info: ") + e.what());
  }
  out.Validate();
  return out;
}

void MeetingScenario::WriteTo(Scenario& scenario) const {
  scenario.private_info.resize(2);
  for (int p = 0; p < 2; ++p) {
    ojson values = ojson::object();
    for (auto day : kDays) {
      values[std::string(day)] = IntOrDouble(day_values[p].at(std::string(day)));
    }
    auto& info = scenario.private_info[p];
    if (!info.is_object()) info = ojson::object();
    info["available_days"] = available_days[p];
    info["day_values"] = values;
  }
}

bool MeetingScenario::Available(int player, std::string_view day) const {
  const auto& days = available_days.at(player);
  return std::find(days.begin(), days.end(), NormalizeLabel(day)) !=
         days.end();
}

void DebateScenario::Validate() const {
  if (Trim(topic).empty()) {
    throw Error(ErrorCode::kConfigInvalid, "debate topic is empty");
  }
  const bool ok = (sides[0] == "for" && sides[1] == "against") ||
                  (sides[0] == "against" && sides[1] == "for");
  if (!ok) {
    throw Error(ErrorCode::kConfigInvalid,
                "debate sides must be a permutation of {for, against}");
  }
}

DebateScenario DebateScenario::FromScenario(const Scenario& scenario) {
  CheckPlayers(scenario);
  DebateScenario out;
  try {
    out.topic = Field(scenario, 0, "debate_topic").get<std::string>();
    for (int p = 0; p < 2; ++p) {
      out.sides[p] =
          NormalizeLabel(Field(scenario, p, "debate_side").get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigInvalid,
                std::string("debate private_info: ") + e.what());
  }
  out.Validate();
  return out;
}

void DebateScenario::WriteTo(Scenario& scenario) const {
  scenario.private_info.resize(2);
  for (int p = 0; p < 2; ++p) {
    auto& info = scenario.private_info[p];
    if (!info.is_object()) info = ojson::object();
    info["debate_topic"] = topic;
    info["debate_side"] = sides[p];
  }
}

const std::vector<std::string>& NameBank() { return AssetLines("names.txt"); }

const std::vector<std::string>& DebateTopics() {
  return AssetLines("debate_topics.txt");
}

std::vector<std::string> DefaultActionLabels(DomainId domain) {
  switch (domain) {
    case DomainId::kFruit:
      return {"calm", "assertive", "submissive", "any"};
    case DomainId::kMeeting: {
      std::vector<std::string> labels(kDays.begin(), kDays.end());
      labels.emplace_back(kAnyLabel);
      return labels;
    }
    case DomainId::kDebate:
      return {"logos", "ethos", "pathos", "any"};
  }
  throw Error(ErrorCode::kUnknownDomain, "unknown domain");
}

std::pair<double, double> DomainUtilityRange(DomainId domain) {
  switch (domain) {
    case DomainId::kFruit:
      // A basket of at most 4 * 4 fruit worth at most 10 each changes hands.
      return {-160.0, 160.0};
    case DomainId::kMeeting:
      return {0.0, 10.0};
    case DomainId::kDebate:
      return {0.0, 1.0};
  }
  throw Error(ErrorCode::kUnknownDomain, "unknown domain");
}

Scenario GenerateScenario(DomainId domain, uint64_t rng_seed) {
  Rng rng(MixHash(rng_seed, static_cast<uint64_t>(domain) + 1));
  const auto& names = NameBank();
  const int64_t a = UniformInt(rng, 0, names.size() - 1);
  int64_t b = UniformInt(rng, 0, names.size() - 2);
  if (b >= a) ++b;

  Scenario scenario;
  scenario.sender = names[a];
  scenario.receiver = names[b];
  OutcomeParams params;
  params.sender = scenario.sender;
  params.receiver = scenario.receiver;

  switch (domain) {
    case DomainId::kFruit: {
      FruitScenario fruit;
      for (int p = 0; p < 2; ++p) {
        for (auto f : kFruits) {
          fruit.endowment[p][std::string(f)] = UniformInt(rng, 0, 4);
          fruit.valuations[p][std::string(f)] = UniformInt(rng, 1, 10);
        }
      }
      fruit.WriteTo(scenario);
      std::vector<std::string> owned;
      for (auto f : kFruits) {
        if (fruit.endowment[0].at(std::string(f)) > 0) owned.emplace_back(f);
      }
      if (owned.empty()) owned.emplace_back(kFruits[0]);
      params.fruit_give = owned[UniformInt(rng, 0, owned.size() - 1)];
      params.num_give =
          std::max(1, fruit.endowment[0].at(params.fruit_give) > 0
                          ? static_cast<int>(UniformInt(
                                rng, 1, fruit.endowment[0].at(params.fruit_give)))
                          : 1);
      std::vector<std::string> others;
      for (auto f : kFruits) {
        if (f != params.fruit_give) others.emplace_back(f);
      }
      params.fruit_receive = others[UniformInt(rng, 0, others.size() - 1)];
      params.num_receive = static_cast<int>(UniformInt(rng, 1, 3));
      scenario.opening_message =
          RenderOutcomeTemplate(domain, OutcomeTag::kValid, params)[0];
      break;
    }
    case DomainId::kMeeting: {
      MeetingScenario meeting;
      for (int p = 0; p < 2; ++p) {
        std::vector<std::string> days(kDays.begin(), kDays.end());
        // Fisher-Yates with the portable integer draw.
        for (int i = static_cast<int>(days.size()) - 1; i > 0; --i) {
          std::swap(days[i], days[UniformInt(rng, 0, i)]);
        }
        const int k = static_cast<int>(UniformInt(rng, 2, 5));
        for (auto day : kDays) {
          if (std::find(days.begin(), days.begin() + k, day) !=
              days.begin() + k) {
            meeting.available_days[p].emplace_back(day);
          }
          meeting.day_values[p][std::string(day)] = UniformInt(rng, 0, 10);
        }
      }
      meeting.WriteTo(scenario);
      const auto& mine = meeting.available_days[0];
      params.day = mine[UniformInt(rng, 0, mine.size() - 1)];
      scenario.opening_message =
          RenderOutcomeTemplate(domain, OutcomeTag::kValid, params)[0];
      break;
    }
    case DomainId::kDebate: {
      DebateScenario debate;
      const auto& topics = DebateTopics();
      debate.topic = topics[UniformInt(rng, 0, topics.size() - 1)];
      const bool sender_for = UniformInt(rng, 0, 1) == 0;
      debate.sides = {sender_for ? "for" : "against",
                      sender_for ? "against" : "for"};
      debate.WriteTo(scenario);
      scenario.opening_message =
          "Hi " + scenario.receiver + ", today we debate the statement \"" +
          debate.topic + "\" I will argue " + debate.sides[0] +
          " it. Best, " + scenario.sender;
      break;
    }
  }
  return scenario;
}

GameConfig MakeDomainConfig(DomainId domain, const Scenario& scenario,
                            std::optional<std::vector<std::string>> labels) {
  GameConfig config;
  config.domain_id = domain;
  config.action_labels = labels ? *labels : DefaultActionLabels(domain);
  const auto [lo, hi] = DomainUtilityRange(domain);
  config.min_utility = lo;
  config.max_utility = hi;
  config.num_llm_seeds = 2;
  config.num_max_replies = 1;
  config.header_template = StripTrailingNewlines(
      Asset("header_" + std::string(DomainName(domain)) + ".txt"));
  switch (domain) {
    case DomainId::kFruit:
      config.message_title = "Trade Proposal Message";
      break;
    case DomainId::kMeeting:
      config.message_title = "Schedule Proposal Message";
      break;
    case DomainId::kDebate:
      config.message_title = "Debate Message";
      break;
  }
  config.scenario = scenario;
  config.player_names = {scenario.sender, scenario.receiver};
  config.Validate();
  return config;
}

GameConfig GenerateGameConfig(DomainId domain, uint64_t rng_seed) {
  return MakeDomainConfig(domain, GenerateScenario(domain, rng_seed));
}

std::array<std::string, 2> RenderOutcomeTemplate(DomainId domain,
                                                 OutcomeTag outcome,
                                                 const OutcomeParams& params) {
  auto need = [](bool ok, const char* name) {
    if (!ok) {
      throw Error(ErrorCode::kMissingParam,
                  std::string("outcome template needs ") + name);
    }
  };
  if (domain == DomainId::kDebate) {
    throw Error(ErrorCode::kUnknownDomain,
                "no outcome templates for the debate domain");
  }
  need(!params.sender.empty(), "sender");
  need(!params.receiver.empty(), "receiver");
  const std::string prefix = "outcome_" + std::string(DomainName(domain)) + "_";
  std::string proposal = Asset(prefix + "proposal.txt").data();
  std::string reply =
      Asset(prefix + std::string(OutcomeTagName(outcome)) + ".txt").data();
  if (domain == DomainId::kFruit) {
    need(params.num_give > 0, "num_give");
    need(params.num_receive > 0, "num_receive");
    need(!params.fruit_give.empty(), "fruit_give");
    need(!params.fruit_receive.empty(), "fruit_receive");
    proposal = ReplaceAll(proposal, "{num_give}", std::to_string(params.num_give));
    proposal = ReplaceAll(proposal, "{fruit_give}",
                          PluralFruit(params.fruit_give, params.num_give));
    proposal = ReplaceAll(proposal, "{num_receive}",
                          std::to_string(params.num_receive));
    proposal = ReplaceAll(proposal, "{fruit_receive}",
                          PluralFruit(params.fruit_receive, params.num_receive));
  } else {
    need(!params.day.empty(), "day");
    const std::string day = Capitalize(NormalizeLabel(params.day));
    proposal = ReplaceAll(proposal, "{day}", day);
    reply = ReplaceAll(reply, "{day}", day);
  }
  std::array<std::string, 2> out = {proposal, reply};
  for (auto& text : out) {
    text = ReplaceAll(text, "{sender}", params.sender);
    text = ReplaceAll(text, "{receiver}", params.receiver);
    text = StripTrailingNewlines(text);
  }
  return out;
}

bool IsAcceptance(DomainId domain, std::string_view message) {
  const std::string text = Normalize(message);
  if (domain == DomainId::kFruit) {
    return ContainsAny(text, {"i would like to make that trade",
                              "i accept", "willing to accept", "i agree",
                              "it's a deal", "it is a deal", "deal!",
                              "happy to make that trade"});
  }
  if (domain == DomainId::kMeeting) {
    return ContainsAny(text, {"yes, i would like to meet", "i accept",
                              "willing to accept", "i agree", "works for me",
                              "see you on"});
  }
  return false;
}

bool IsRejection(DomainId domain, std::string_view message) {
  const std::string text = Normalize(message);
  if (domain == DomainId::kFruit) {
    return ContainsAny(text, {"i do not want to do this trade",
                              "i don't want to do this trade",
                              "don't see a way to make a deal",
                              "do not see a way to make a deal", "i reject",
                              "i decline", "not interested in trading"});
  }
  if (domain == DomainId::kMeeting) {
    return ContainsAny(text, {"i do not want to meet", "i don't want to meet",
                              "i cannot meet", "i can't meet", "i reject",
                              "i decline"});
  }
  return false;
}

TradeParse ParseTrade(const std::vector<MessageEvent>& messages) {
  static const std::regex kTrade(
      R"(\b(\d+|an|a|one|two|three|four|five|six|seven|eight|nine|ten) )"
      R"((apples?|bananas?|blueberry|blueberries|kiwis?) for )"
      R"((\d+|an|a|one|two|three|four|five|six|seven|eight|nine|ten) )"
      R"((apples?|bananas?|blueberry|blueberries|kiwis?)\b)");
  TradeParse parse;
  for (const auto& m : messages) {
    const std::string text = Normalize(m.text);
    for (auto it = std::sregex_iterator(text.begin(), text.end(), kTrade);
         it != std::sregex_iterator(); ++it) {
      const auto& match = *it;
      const size_t start = match.position(0);
      const size_t clause = text.find_last_of(".!?", start);
      const std::string prefix = text.substr(
          clause == std::string::npos ? 0 : clause + 1,
          start - (clause == std::string::npos ? 0 : clause + 1));
      // "I accept two kiwis for one banana": the author receives the first
      // item, so the co-player is the one offering it.
      const bool reversed = prefix.find("accept") != std::string::npos ||
                            prefix.find("take") != std::string::npos;
      parse.give.clear();
      parse.receive.clear();
      parse.give[SingularFruit(match[2])] += ParseCount(match[1]);
      parse.receive[SingularFruit(match[4])] += ParseCount(match[3]);
      parse.proposer = reversed ? 1 - m.author : m.author;
    }
  }
  if (!messages.empty()) {
    const std::string& last = messages.back().text;
    parse.rejected = IsRejection(DomainId::kFruit, last);
    parse.accepted = !parse.rejected && IsAcceptance(DomainId::kFruit, last);
  }
  return parse;
}

RewardJudgment FruitRewardOracle(const FruitScenario& scenario,
                                 const TradeParse& parse) {
  RewardJudgment j;
  j.values = {0.0, 0.0};
  if (parse.rejected) {
    j.outcome = OutcomeTag::kRejected;
    j.rationale = "trade rejected";
    return j;
  }
  j.outcome = OutcomeTag::kIncomplete;
  if (!parse.accepted) {
    j.rationale = "no agreement";
    return j;
  }
  if (parse.proposer < 0 || parse.give.empty() || parse.receive.empty()) {
    j.parse_failure = true;
    j.rationale = "accepted, but no concrete trade was found";
    return j;
  }
  const int proposer = parse.proposer;
  const int responder = 1 - proposer;
  auto covers = [&](int player, const std::map<std::string, int>& basket) {
    for (const auto& [fruit, n] : basket) {
      auto it = scenario.endowment[player].find(fruit);
      if (it == scenario.endowment[player].end() || it->second < n) {
        return false;
      }
    }
    return true;
  };
  if (!covers(proposer, parse.give) || !covers(responder, parse.receive)) {
    j.invalid_agreement = true;
    j.rationale = "accepted trade exceeds an endowment";
    return j;
  }
  auto value = [&](int player, const std::map<std::string, int>& basket) {
    double total = 0.0;
    for (const auto& [fruit, n] : basket) {
      total += n * scenario.valuations[player].at(fruit);
    }
    return total;
  };
  j.values[proposer] = value(proposer, parse.receive) -
                       value(proposer, parse.give);
  j.values[responder] = value(responder, parse.give) -
                        value(responder, parse.receive);
  j.outcome = OutcomeTag::kValid;
  j.rationale = "valid trade";
  return j;
}

MeetingParse ParseMeeting(const std::vector<MessageEvent>& messages) {
  MeetingParse parse;
  if (messages.empty()) return parse;
  const std::string& last = messages.back().text;
  parse.rejected = IsRejection(DomainId::kMeeting, last);
  parse.accepted = !parse.rejected && IsAcceptance(DomainId::kMeeting, last);
  for (auto it = messages.rbegin(); it != messages.rend(); ++it) {
    parse.day = DayIn(Normalize(it->text));
    if (!parse.day.empty()) break;
  }
  return parse;
}

RewardJudgment MeetingRewardOracle(const MeetingScenario& scenario,
                                   const std::vector<MessageEvent>& messages) {
  const MeetingParse parse = ParseMeeting(messages);
  RewardJudgment j;
  j.values = {0.0, 0.0};
  if (parse.rejected) {
    j.outcome = OutcomeTag::kRejected;
    j.rationale = "meeting rejected";
    return j;
  }
  j.outcome = OutcomeTag::kIncomplete;
  if (!parse.accepted) {
    j.rationale = "no agreement";
    return j;
  }
  if (parse.day.empty()) {
    j.parse_failure = true;
    j.rationale = "accepted, but no day was named";
    return j;
  }
  if (!scenario.Available(0, parse.day) || !scenario.Available(1, parse.day)) {
    j.invalid_agreement = true;
    j.rationale = "agreed day is not available to both players";
    return j;
  }
  for (int p = 0; p < 2; ++p) {
    j.values[p] = scenario.day_values[p].at(parse.day);
  }
  j.outcome = OutcomeTag::kValid;
  j.rationale = "meeting on " + parse.day;
  return j;
}

int StubDebateJudge::Winner(const DebateScenario& /*scenario*/,
                            const std::vector<MessageEvent>& messages,
                            const GameConfig& /*config*/) {
  std::array<double, 2> score = {0.0, 0.0};
  for (const auto& m : messages) {
    const std::string text = CollapseWhitespace(m.text);
    double words = text.empty()
                       ? 0.0
                       : 1.0 + std::count(text.begin(), text.end(), ' ');
    const size_t open = text.rfind("[[action:");
    if (open != std::string::npos) {
      const size_t close = text.find("]]", open);
      const std::string label =
          close == std::string::npos ? "" : text.substr(open + 9, close - open - 9);
      if (NormalizeLabel(label) != kAnyLabel) words *= 2.0;
    }
    score.at(m.author) += words;
  }
  return score[1] > score[0] ? 1 : 0;
}

ModelDebateJudge::ModelDebateJudge(std::shared_ptr<RewardModel> model)
    : model_(std::move(model)) {}

int ModelDebateJudge::Winner(const DebateScenario& /*scenario*/,
                             const std::vector<MessageEvent>& messages,
                             const GameConfig& config) {
  Transcript transcript;
  transcript.messages = messages;
  transcript.thread = RenderThread(config, messages);
  const RewardJudgment j = model_->Score(transcript, config);
  if (j.values.size() < 2) {
    throw Error(ErrorCode::kBackendFailure, "debate judge returned no scores");
  }
  return j.values[1] > j.values[0] ? 1 : 0;
}

RewardJudgment DebateRewardOracle(const DebateScenario& scenario,
                                  const std::vector<MessageEvent>& messages,
                                  DebateJudge& judge,
                                  const GameConfig& config) {
  const int winner = judge.Winner(scenario, messages, config);
  RewardJudgment j;
  j.values = {0.0, 0.0};
  j.values.at(winner) = 1.0;
  j.outcome = OutcomeTag::kValid;
  j.rationale = "player " + std::to_string(winner) + " wins the debate";
  return j;
}

OracleRewardModel::OracleRewardModel(std::shared_ptr<DebateJudge> judge)
    : judge_(std::move(judge)) {}

RewardJudgment OracleRewardModel::Score(const Transcript& transcript,
                                        const GameConfig& config) {
  RewardJudgment j;
  switch (config.domain_id) {
    case DomainId::kFruit:
      j = FruitRewardOracle(FruitScenario::FromScenario(config.scenario),
                            ParseTrade(transcript.messages));
      break;
    case DomainId::kMeeting:
      j = MeetingRewardOracle(MeetingScenario::FromScenario(config.scenario),
                              transcript.messages);
      break;
    case DomainId::kDebate:
      j = DebateRewardOracle(DebateScenario::FromScenario(config.scenario),
                             transcript.messages, *judge_, config);
      break;
  }
  if (j.parse_failure) parse_failures_.fetch_add(1);
  return j;
}

}  // namespace dialogue_games
