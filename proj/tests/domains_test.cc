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

#include <set>

#include <gtest/gtest.h>

#include "dialogue_games/errors.h"
#include "dialogue_games/evaluation.h"
#include "dialogue_games/stub_backends.h"
#include "test_games.h"

namespace dialogue_games {
namespace {

using testing::AlinaElroyConfig;
using testing::kAlinaOffer;
using testing::kElroyAccepts;

RewardJudgment ScoreFruit(const GameConfig& config,
                          std::vector<MessageEvent> messages) {
  Transcript t;
  t.messages = std::move(messages);
  t.thread = RenderThread(config, t.messages);
  OracleRewardModel oracle;
  return oracle.Score(t, config);
}

TEST(FruitOracleTest, WorkedAgreementScoresPlusMinusThree) {
  const GameConfig config = AlinaElroyConfig();
  const RewardJudgment j =
      ScoreFruit(config, {{0, kAlinaOffer}, {1, kElroyAccepts}});
  EXPECT_EQ(j.values, (std::vector<double>{3.0, -3.0}));
  EXPECT_EQ(j.outcome, OutcomeTag::kValid);
  const TradeParse parse = ParseTrade({{0, kAlinaOffer}, {1, kElroyAccepts}});
  EXPECT_EQ(parse.proposer, 0);
  EXPECT_EQ(parse.give, (std::map<std::string, int>{{"kiwi", 2}}));
  EXPECT_EQ(parse.receive, (std::map<std::string, int>{{"banana", 1}}));
  EXPECT_TRUE(parse.accepted);
}

TEST(FruitOracleTest, RejectionScoresZero) {
  const GameConfig config = AlinaElroyConfig();
  const RewardJudgment j = ScoreFruit(
      config, {{0, kAlinaOffer},
               {1, "Hi Alina, No, I do not want to do this trade with you. "
                   "Thanks though, Elroy"}});
  EXPECT_EQ(j.values, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(j.outcome, OutcomeTag::kRejected);
}

TEST(FruitOracleTest, InfeasibleAcceptedTradeScoresZero) {
  const GameConfig config = AlinaElroyConfig(/*elroy_apples=*/0);
  const RewardJudgment j = ScoreFruit(
      config, {{1, "Hi Alina, I would like to trade you 1 apple for 1 "
                   "banana. Best, Elroy"},
               {0, "Hi Elroy, Yes, I would like to make that trade with you! "
                   "Best, Alina"}});
  EXPECT_EQ(j.values, (std::vector<double>{0.0, 0.0}));
  EXPECT_TRUE(j.invalid_agreement);
  EXPECT_EQ(j.outcome, OutcomeTag::kIncomplete);
}

TEST(FruitOracleTest, UnparseableChatterIsIncomplete) {
  const TradeParse parse =
      ParseTrade({{0, "Lovely weather."}, {1, "Indeed it is."}});
  EXPECT_FALSE(parse.accepted);
  EXPECT_FALSE(parse.rejected);
  EXPECT_EQ(parse.proposer, -1);
  const RewardJudgment j =
      ScoreFruit(AlinaElroyConfig(), {{0, "Hi"}, {1, "I accept!"}});
  EXPECT_TRUE(j.parse_failure);
  EXPECT_EQ(j.values, (std::vector<double>{0.0, 0.0}));
}

TEST(OutcomeTemplateTest, FruitTexts) {
  OutcomeParams params;
  params.sender = "Ann";
  params.receiver = "Ben";
  params.num_give = 2;
  params.fruit_give = "kiwi";
  params.num_receive = 1;
  params.fruit_receive = "banana";
  const auto valid =
      RenderOutcomeTemplate(DomainId::kFruit, OutcomeTag::kValid, params);
  EXPECT_NE(CollapseWhitespace(valid[0]).find("trade you 2 kiwis for 1 banana"),
            std::string::npos);
  const auto rejected =
      RenderOutcomeTemplate(DomainId::kFruit, OutcomeTag::kRejected, params);
  EXPECT_NE(rejected[1].find("I do not want to do this trade"),
            std::string::npos);
  const auto incomplete =
      RenderOutcomeTemplate(DomainId::kFruit, OutcomeTag::kIncomplete, params);
  EXPECT_NE(CollapseWhitespace(incomplete[1])
                .find("would you accept a different trade"),
            std::string::npos);
  const TradeParse parse = ParseTrade({{0, valid[0]}, {1, valid[1]}});
  EXPECT_EQ(parse.give, (std::map<std::string, int>{{"kiwi", 2}}));
  EXPECT_EQ(parse.receive, (std::map<std::string, int>{{"banana", 1}}));
  EXPECT_TRUE(parse.accepted);
  EXPECT_TRUE(ParseTrade({{0, rejected[0]}, {1, rejected[1]}}).rejected);
  params.day.clear();
  params.sender.clear();
  try {
    RenderOutcomeTemplate(DomainId::kFruit, OutcomeTag::kValid, params);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingParam);
  }
  try {
    RenderOutcomeTemplate(DomainId::kMeeting, OutcomeTag::kValid,
                          OutcomeParams{"a", "b", 0, "", 0, "", ""});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingParam);
  }
}

// The parse of a rendered template recovers every parameter it encodes.
TEST(OutcomeTemplateTest, FruitRoundTripOverRandomScenarios) {
  Rng rng(2024);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const OutcomeTag tag = static_cast<OutcomeTag>(i % 3);
    const OutcomeScenario s =
        GenerateOutcomeScenario(DomainId::kFruit, tag, rng);
    const TradeParse parse = ParseTrade(s.transcript.messages);
    ASSERT_EQ(parse.proposer, 0);
    ASSERT_EQ(parse.give, (std::map<std::string, int>{
                              {s.params.fruit_give, s.params.num_give}}));
    ASSERT_EQ(parse.receive, (std::map<std::string, int>{
                                 {s.params.fruit_receive,
                                  s.params.num_receive}}));
    ASSERT_EQ(parse.accepted, tag == OutcomeTag::kValid);
    ASSERT_EQ(parse.rejected, tag == OutcomeTag::kRejected);
    ++checked;
  }
  EXPECT_EQ(checked, 1000);
}

TEST(MeetingOracleTest, AgreementOnSharedDay) {
  MeetingScenario meeting;
  meeting.available_days = {std::vector<std::string>{"monday", "friday"},
                            std::vector<std::string>{"monday", "tuesday"}};
  for (int p = 0; p < 2; ++p) {
    for (auto d : kDays) meeting.day_values[p][std::string(d)] = 1;
  }
  meeting.day_values[0]["monday"] = 3;
  meeting.day_values[1]["monday"] = 7;
  OutcomeParams params{"Ann", "Ben", 0, "", 0, "", "monday"};
  auto texts =
      RenderOutcomeTemplate(DomainId::kMeeting, OutcomeTag::kValid, params);
  RewardJudgment j = MeetingRewardOracle(meeting, {{0, texts[0]}, {1, texts[1]}});
  EXPECT_EQ(j.values, (std::vector<double>{3.0, 7.0}));
  EXPECT_EQ(j.outcome, OutcomeTag::kValid);

  params.day = "friday";
  texts = RenderOutcomeTemplate(DomainId::kMeeting, OutcomeTag::kValid, params);
  j = MeetingRewardOracle(meeting, {{0, texts[0]}, {1, texts[1]}});
  EXPECT_EQ(j.values, (std::vector<double>{0.0, 0.0}));
  EXPECT_TRUE(j.invalid_agreement);

  texts =
      RenderOutcomeTemplate(DomainId::kMeeting, OutcomeTag::kRejected, params);
  j = MeetingRewardOracle(meeting, {{0, texts[0]}, {1, texts[1]}});
  EXPECT_EQ(j.values, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(j.outcome, OutcomeTag::kRejected);
  EXPECT_EQ(ParseMeeting({{0, texts[0]}, {1, texts[1]}}).day, "friday");
}

TEST(DebateOracleTest, StubJudgeCountsWords) {
  const GameConfig config = GenerateGameConfig(DomainId::kDebate, 4);
  const DebateScenario debate = DebateScenario::FromScenario(config.scenario);
  StubDebateJudge judge;
  RewardJudgment j =
      DebateRewardOracle(debate, {{1, "I have the only words."}}, judge, config);
  EXPECT_EQ(j.values, (std::vector<double>{0.0, 1.0}));
  j = DebateRewardOracle(debate, {{0, "one two"}, {1, "three four"}}, judge,
                         config);
  EXPECT_EQ(j.values, (std::vector<double>{1.0, 0.0}));
  // A marked instruction doubles the weight of a message.
  j = DebateRewardOracle(
      debate, {{0, "one two three"}, {1, "two words [[action:logos]]"}}, judge,
      config);
  EXPECT_EQ(j.values, (std::vector<double>{0.0, 1.0}));
}

TEST(DebateOracleTest, RewardsAreOneHot) {
  BackendBundle b = MakeStubBundle(0.5);
  for (uint64_t seed = 0; seed < 50; ++seed) {
    const GameConfig config = GenerateGameConfig(DomainId::kDebate, seed);
    DialogueGame game(config, b);
    DialogueState s = game.NewInitialState();
    while (!s.terminal) s = game.ApplyAction(s, static_cast<int>(seed % 2));
    const auto r = game.Returns(s);
    EXPECT_EQ(r[0] + r[1], 1.0);
    EXPECT_TRUE(r[0] == 0.0 || r[0] == 1.0);
  }
}

TEST(ScenarioTest, Deterministic) {
  for (DomainId d : {DomainId::kFruit, DomainId::kMeeting, DomainId::kDebate}) {
    EXPECT_EQ(ToJson(GenerateGameConfig(d, 9)), ToJson(GenerateGameConfig(d, 9)));
    EXPECT_NE(ToJson(GenerateGameConfig(d, 9)),
              ToJson(GenerateGameConfig(d, 10)));
  }
}

TEST(ScenarioTest, FruitInvariants) {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    const Scenario s = GenerateScenario(DomainId::kFruit, seed);
    EXPECT_NE(s.sender, s.receiver);
    const FruitScenario fruit = FruitScenario::FromScenario(s);
    for (int p = 0; p < 2; ++p) {
      ASSERT_EQ(fruit.endowment[p].size(), 4u);
      for (auto f : kFruits) {
        const int n = fruit.endowment[p].at(std::string(f));
        const double v = fruit.valuations[p].at(std::string(f));
        EXPECT_GE(n, 0);
        EXPECT_LE(n, 4);
        EXPECT_GE(v, 1);
        EXPECT_LE(v, 10);
      }
    }
    // The opening proposal is a concrete trade the sender can cover.
    const TradeParse parse = ParseTrade({{0, s.opening_message}});
    ASSERT_EQ(parse.give.size(), 1u);
    const auto& [fruit_name, n] = *parse.give.begin();
    EXPECT_LE(n, std::max(1, fruit.endowment[0].at(fruit_name)));
  }
}

TEST(ScenarioTest, MeetingInvariants) {
  for (uint64_t seed = 0; seed < 1000; ++seed) {
    const MeetingScenario m = MeetingScenario::FromScenario(
        GenerateScenario(DomainId::kMeeting, seed));
    for (int p = 0; p < 2; ++p) {
      EXPECT_GE(m.available_days[p].size(), 2u);
      EXPECT_LE(m.available_days[p].size(), 5u);
    }
  }
}

TEST(ScenarioTest, OracleRewardsStayInDomainRange) {
  BackendBundle b = MakeStubBundle(0.7);
  for (DomainId d : {DomainId::kFruit, DomainId::kMeeting, DomainId::kDebate}) {
    const auto [lo, hi] = DomainUtilityRange(d);
    for (uint64_t seed = 0; seed < 30; ++seed) {
      const GameConfig config = GenerateGameConfig(d, seed);
      EXPECT_EQ(config.min_utility, lo);
      EXPECT_EQ(config.max_utility, hi);
      DialogueGame game(config, b);
      DialogueState s = game.NewInitialState();
      while (!s.terminal) s = game.ApplyAction(s, 0);
      const RewardJudgment j =
          b.reward->Score(game.MakeTranscript(s), config);
      for (double v : j.values) {
        EXPECT_GE(v, lo);
        EXPECT_LE(v, hi);
      }
    }
  }
}

TEST(ScenarioTest, BanksAreDistinct) {
  const auto& names = NameBank();
  EXPECT_EQ(std::set<std::string>(names.begin(), names.end()).size(),
            names.size());
  EXPECT_EQ(DebateTopics().size(), 20u);
  EXPECT_EQ(DefaultActionLabels(DomainId::kFruit),
            (std::vector<std::string>{"calm", "assertive", "submissive",
                                      "any"}));
}

TEST(ScenarioTest, PrivateInfoValidation) {
  Scenario s = GenerateScenario(DomainId::kFruit, 1);
  s.private_info[0]["fruit_endowment"]["kiwi"] = -1;
  EXPECT_THROW(FruitScenario::FromScenario(s).Validate(), Error);
  Scenario d = GenerateScenario(DomainId::kDebate, 1);
  d.private_info[1]["debate_side"] = d.private_info[0]["debate_side"];
  EXPECT_THROW(DebateScenario::FromScenario(d).Validate(), Error);
}

}  // namespace
}  // namespace dialogue_games
