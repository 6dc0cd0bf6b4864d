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

#include "dialogue_games/backends.h"

#include <cmath>

#include <gtest/gtest.h>

#include "dialogue_games/domains.h"
#include "dialogue_games/errors.h"
#include "dialogue_games/stub_backends.h"
#include "test_games.h"

namespace dialogue_games {
namespace {

GenerationRequest Request(const std::string& prompt, int seed,
                          const std::string& label) {
  GenerationRequest r;
  r.prompt = prompt;
  r.seed = seed;
  r.context.domain = DomainId::kFruit;
  r.context.action_label = label;
  r.context.action_labels = {"calm", "assertive", "submissive", "any"};
  r.context.sender = "Ann";
  r.context.receiver = "Ben";
  return r;
}

TEST(StubGeneratorTest, FollowsInstructionAtRateOne) {
  StubGenerator gen(StubProfile::Default(1.0));
  const std::string text = gen.Generate(Request("p", 0, "assertive"));
  EXPECT_NE(text.find("[[action:assertive]]"), std::string::npos);
  EXPECT_EQ(FindActionMarker(text), "assertive");
  EXPECT_NE(text.find("Ben"), std::string::npos);
}

TEST(StubGeneratorTest, DeterministicPerPromptAndSeed) {
  StubGenerator gen(StubProfile::Default(0.5));
  EXPECT_EQ(gen.Generate(Request("p", 3, "calm")),
            gen.Generate(Request("p", 3, "calm")));
  StubGenerator other(StubProfile::Default(0.5));
  EXPECT_EQ(gen.Generate(Request("q", 1, "calm")),
            other.Generate(Request("q", 1, "calm")));
}

// 3 sigma of Binomial(10000, 0.7) is 137.5.
TEST(StubGeneratorTest, FollowRateMatchesBinomialBand) {
  StubGenerator gen(StubProfile::Default(0.7));
  int followed = 0;
  for (int i = 0; i < 10'000; ++i) {
    const std::string label = i % 2 ? "calm" : "submissive";
    const std::string text =
        gen.Generate(Request("prompt " + std::to_string(i), i % 2, label));
    if (FindActionMarker(text) == label) ++followed;
  }
  EXPECT_NEAR(followed, 7000, 150);
}

TEST(StubGeneratorTest, MeetingMessagesNameTheExpressedDay) {
  StubGenerator gen(StubProfile::Default(1.0));
  GenerationRequest r = Request("m", 0, "thursday");
  r.context.domain = DomainId::kMeeting;
  r.context.action_labels = {"monday", "thursday", "any"};
  const std::string text = gen.Generate(r);
  const MeetingParse parse = ParseMeeting({{0, text}});
  EXPECT_EQ(parse.day, "thursday");
}

TEST(StubGeneratorTest, RejectsBadProfile) {
  EXPECT_THROW(StubProfile::Default(1.5), Error);
  StubProfile empty;
  EXPECT_THROW(StubGenerator{empty}, Error);
}

TEST(StubClassifierTest, OneHotOnMarkerElseUniform) {
  StubClassifier c;
  const std::vector<std::string> labels = {"calm", "assertive", "submissive",
                                           "any"};
  EXPECT_EQ(c.Classify("Hello [[action:calm]]", labels),
            (std::vector<double>{1, 0, 0, 0}));
  EXPECT_EQ(c.Classify("no marker here", labels),
            (std::vector<double>{0.25, 0.25, 0.25, 0.25}));
  EXPECT_EQ(c.Classify("[[action:angry]]", labels),
            (std::vector<double>{0.25, 0.25, 0.25, 0.25}));
}

TEST(RuleTerminatorTest, AcceptanceRejectionAndOpenThreads) {
  const GameConfig config = GenerateGameConfig(DomainId::kFruit, 1);
  OutcomeParams params{"Ann", "Ben", 2, "kiwi", 1, "banana", ""};
  RuleTerminator judge;
  Transcript t;
  EXPECT_FALSE(judge.IsTerminal(t, config));
  const auto valid =
      RenderOutcomeTemplate(DomainId::kFruit, OutcomeTag::kValid, params);
  t.messages = {{0, valid[0]}, {1, valid[1]}};
  EXPECT_TRUE(judge.IsTerminal(t, config));
  const auto incomplete =
      RenderOutcomeTemplate(DomainId::kFruit, OutcomeTag::kIncomplete, params);
  t.messages = {{0, incomplete[0]}, {1, incomplete[1]}};
  EXPECT_FALSE(judge.IsTerminal(t, config));
}

TEST(ScriptedGeneratorTest, LooksUpByPromptHashAndSeed) {
  nlohmann::json fixture = {
      {"responses",
       {{{"prompt_hash", HexHash(Hash64("hello"))}, {"seed", 1},
         {"text", "scripted reply"}}}}};
  auto gen = ScriptedGenerator::FromJson(fixture);
  EXPECT_EQ(gen->Generate(Request("hello", 1, "calm")), "scripted reply");
  EXPECT_THROW(gen->Generate(Request("hello", 0, "calm")), Error);
  gen->AddResponse("other", 0, "added");
  EXPECT_EQ(gen->Generate(Request("other", 0, "calm")), "added");
  ScriptedGenerator fallback({"only"});
  EXPECT_EQ(fallback.Generate(Request("anything", 5, "calm")), "only");
}

TEST(ScriptedClassifierTest, AnswersByMessageHash) {
  ScriptedClassifier c({{HexHash(Hash64("msg")), "assertive"}});
  const std::vector<std::string> labels = {"calm", "assertive"};
  EXPECT_EQ(c.Classify("msg", labels), (std::vector<double>{0, 1}));
  EXPECT_EQ(c.Classify("other", labels), (std::vector<double>{0.5, 0.5}));
}

TEST(CachingGeneratorTest, ForwardsEachDistinctRequestOnce) {
  auto inner = std::make_shared<StubGenerator>(StubProfile::Default(1.0));
  CachingGenerator cache(inner);
  const auto a = cache.Generate(Request("x", 0, "calm"));
  EXPECT_EQ(cache.Generate(Request("x", 0, "calm")), a);
  EXPECT_EQ(cache.backend_calls(), 1);
  cache.Generate(Request("x", 1, "calm"));
  cache.Generate(Request("x", 0, "assertive"));
  EXPECT_EQ(cache.backend_calls(), 3);
}

TEST(PayoffTableRewardTest, ReadsDecisions) {
  PayoffTableReward reward({{{"a", "b"}, {1.0, 2.0}}});
  GameConfig config = GenerateGameConfig(DomainId::kDebate, 0);
  config.action_labels = {"a", "b", "any"};
  Transcript t;
  t.decisions = {{1, 1}, {0, 0}};
  EXPECT_EQ(reward.Score(t, config).values, (std::vector<double>{1.0, 2.0}));
  t.decisions = {{0, 1}, {1, 0}};
  EXPECT_THROW(reward.Score(t, config), Error);
}

TEST(EmbeddedMatrixGameTest, AnyPaysTheUniformMix) {
  const EmbeddedMatrixGame mp = MatchingPennies();
  EXPECT_EQ(mp.config.action_labels,
            (std::vector<std::string>{"heads", "tails", "any"}));
  Transcript t;
  t.decisions = {{0, 2}, {1, 0}};
  // Row's "any" against heads: mean of +1 and -1.
  EXPECT_EQ(mp.backends.reward->Score(t, mp.config).values,
            (std::vector<double>{0.0, 0.0}));
  t.decisions = {{0, 0}, {1, 0}};
  EXPECT_EQ(mp.backends.reward->Score(t, mp.config).values,
            (std::vector<double>{1.0, -1.0}));
  EXPECT_THROW(MakeEmbeddedMatrixGame({"a"}, {{1, 2}}, {{1}}), Error);
}

TEST(HashedRewardTest, DeterministicAndInRange) {
  HashedReward reward(5, -2.0, 3.0);
  const GameConfig config = GenerateGameConfig(DomainId::kFruit, 0);
  Transcript t;
  t.decisions = {{1, 2}};
  t.thread = "x";
  const auto v = reward.Score(t, config).values;
  EXPECT_EQ(v, reward.Score(t, config).values);
  for (double x : v) {
    EXPECT_GE(x, -2.0);
    EXPECT_LT(x, 3.0);
  }
}

TEST(ArgmaxSetTest, IncludesNearTies) {
  const std::vector<double> v = {0.2, 0.4, 0.4 + 1e-13, 0.1};
  EXPECT_EQ(ArgmaxSet(v), (std::vector<int>{1, 2}));
}

TEST(OutcomeTagTest, NamesRoundTrip) {
  for (OutcomeTag t :
       {OutcomeTag::kValid, OutcomeTag::kRejected, OutcomeTag::kIncomplete}) {
    EXPECT_EQ(ParseOutcomeTag(OutcomeTagName(t)), t);
  }
  EXPECT_THROW(ParseOutcomeTag("great"), Error);
}

}  // namespace
}  // namespace dialogue_games
