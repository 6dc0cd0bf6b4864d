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

#include "dialogue_games/evaluation.h"

#include <chrono>
#include <cmath>

#include <gtest/gtest.h>

#include "dialogue_games/cfr.h"
#include "dialogue_games/errors.h"
#include "dialogue_games/game_tree.h"
#include "dialogue_games/stub_backends.h"
#include "test_games.h"

namespace dialogue_games {
namespace {

using testing::BruteForceNashConv;
using testing::MakeRandomSmallGame;

// Returns the negated oracle values and remembers the originals.
class SignFlipModel : public RewardModel {
 public:
  RewardJudgment Score(const Transcript& t, const GameConfig& c) override {
    RewardJudgment j = oracle_.Score(t, c);
    for (double& v : j.values) {
      seen.push_back(v);
      ranges.push_back(c.max_utility - c.min_utility);
      v = -v;
    }
    return j;
  }
  std::vector<double> seen;
  std::vector<double> ranges;

 private:
  OracleRewardModel oracle_;
};

TEST(SteeringTest, PerfectFollowerIsAlwaysRight) {
  BackendBundle b = MakeStubBundle(1.0);
  const auto r = SteeringAccuracy(DomainId::kFruit, *b.generator,
                                  *b.classifier,
                                  {"calm", "assertive", "submissive"}, 300, 1);
  EXPECT_EQ(r.TotalSamples(), 300);
  EXPECT_EQ(r.TotalCorrect(), 300);
  EXPECT_EQ(r.ambiguous, 0);
  EXPECT_DOUBLE_EQ(r.RandomBaseline(), 1.0 / 3);
}

TEST(SteeringTest, FollowRateWithinThreeSigma) {
  const double rate = 0.75;
  const int n = 10000;
  BackendBundle b = MakeStubBundle(rate);
  const auto r = SteeringAccuracy(DomainId::kMeeting, *b.generator,
                                  *b.classifier,
                                  {"calm", "assertive", "submissive"}, n, 7);
  const double sigma = std::sqrt(rate * (1 - rate) / n);
  EXPECT_NEAR(r.Overall(), rate, 3 * sigma);
  int64_t total = 0;
  for (auto s : r.samples) total += s;
  EXPECT_EQ(total, n);
}

TEST(SteeringTest, CsvRoundTrip) {
  SteeringReport r;
  r.labels = {"logos", "ethos"};
  r.correct = {3, 1};
  r.samples = {4, 4};
  EXPECT_DOUBLE_EQ(r.Accuracy(0), 0.75);
  EXPECT_DOUBLE_EQ(r.Overall(), 0.5);
  const auto back = SteeringReport::FromCsv(r.ToCsv());
  EXPECT_EQ(back.labels, r.labels);
  EXPECT_EQ(back.correct, r.correct);
  EXPECT_EQ(back.samples, r.samples);
  EXPECT_NE(r.ToCsv().find("total,0.5,8"), std::string::npos);
}

TEST(SignBucketTest, ZeroBand) {
  EXPECT_EQ(SignBucket(1e-10), 0);
  EXPECT_EQ(SignBucket(-1e-9), 0);
  EXPECT_EQ(SignBucket(2e-9), 1);
  EXPECT_EQ(SignBucket(-3.0), -1);
}

TEST(OutcomeScenarioTest, OracleAgreesWithRequestedOutcome) {
  OracleRewardModel oracle;
  for (DomainId d : {DomainId::kFruit, DomainId::kMeeting}) {
    Rng rng(3);
    for (OutcomeTag tag : {OutcomeTag::kValid, OutcomeTag::kRejected,
                           OutcomeTag::kIncomplete}) {
      for (int i = 0; i < 200; ++i) {
        const auto s = GenerateOutcomeScenario(d, tag, rng);
        const auto j = oracle.Score(s.transcript, s.config);
        EXPECT_EQ(j.outcome, tag) << DomainName(d) << " " << i;
        EXPECT_FALSE(j.parse_failure);
        EXPECT_FALSE(j.invalid_agreement);
        if (tag != OutcomeTag::kValid) {
          EXPECT_EQ(j.values, (std::vector<double>{0.0, 0.0}));
        }
      }
    }
  }
}

TEST(RewardErrorTest, OracleAsModelIsExact) {
  OracleRewardModel model, oracle;
  const auto start = std::chrono::steady_clock::now();
  for (DomainId d : {DomainId::kFruit, DomainId::kMeeting}) {
    const auto report = RewardErrorAll(d, model, oracle, 1000, 11);
    ASSERT_EQ(report.rows.size(), 4u);
    for (const auto& row : report.rows) {
      EXPECT_EQ(row.norm, 0.0) << row.outcome;
      EXPECT_EQ(row.sgn, 0.0) << row.outcome;
    }
    EXPECT_EQ(report.rows.back().outcome, "All");
    EXPECT_EQ(report.rows.back().samples, 6000);
  }
  EXPECT_LE(std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start).count(),
            10.0);
}

TEST(RewardErrorTest, SignFlipCountsNonzeroTruth) {
  for (DomainId d : {DomainId::kFruit, DomainId::kMeeting}) {
    for (OutcomeTag tag : {OutcomeTag::kValid, OutcomeTag::kRejected}) {
      SignFlipModel flip;
      OracleRewardModel oracle;
      const auto row = RewardError(d, flip, oracle, tag, 1000, 5);
      ASSERT_EQ(flip.seen.size(), 2000u);
      double nonzero = 0.0, norm = 0.0;
      for (size_t i = 0; i < flip.seen.size(); ++i) {
        nonzero += SignBucket(flip.seen[i]) != 0;
        norm += 2 * std::abs(flip.seen[i]) / flip.ranges[i];
      }
      EXPECT_EQ(row.samples, 2000);
      EXPECT_NEAR(row.sgn, nonzero / 2000, 1e-12);
      EXPECT_NEAR(row.norm, norm / 2000, 1e-12);
      if (tag == OutcomeTag::kValid) EXPECT_GT(row.sgn, 0.0);
    }
  }
}

TEST(RewardErrorTest, CsvRoundTrip) {
  RewardErrorReport r;
  r.rows = {{"valid", 0.25, 0.5, 10}, {"All", 0.125, 0.25, 20}};
  const auto back = RewardErrorReport::FromCsv(r.ToCsv());
  ASSERT_EQ(back.rows.size(), 2u);
  EXPECT_EQ(back.rows[1].outcome, "All");
  EXPECT_DOUBLE_EQ(back.rows[0].norm, 0.25);
  EXPECT_EQ(back.rows[1].samples, 20);
}

TEST(Table1Test, RowMatchesIndependentComputation) {
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    auto small = MakeRandomSmallGame(seed);
    const Table1Row row =
        EvaluateGame(small.config, seed, 20, small.backends);
    DialogueGame game(small.config, small.backends);
    const GameTree tree = GameTree::Build(game);
    const TabularPolicy avg = CfrSolve(tree, 20);
    EXPECT_NEAR(row.nash_conv, BruteForceNashConv(tree, avg), 1e-9);

    // Gain: each player's switch from "any" to the solver policy while the
    // co-player stays on "any".
    const FixedActionPolicy any(small.config.AnyActionIndex());
    const auto base = ExpectedReturns(tree, any);
    double gain = 0.0;
    for (int p = 0; p < 2; ++p) {
      std::vector<const Policy*> profile = {&any, &any};
      profile[p] = &avg;
      gain += (ExpectedReturns(tree, profile)[p] - base[p]) / 2;
    }
    EXPECT_NEAR(row.cfr_gain, gain, 1e-12);
    EXPECT_EQ(row.ess, gain > row.nash_conv);
    EXPECT_EQ(row.game_seed, seed);
    EXPECT_GT(row.stats.distinct_transitions, 0);
  }
}

TEST(Table1Test, ReportAveragesAndCsv) {
  const auto report =
      RunTable1Protocol(DomainId::kDebate, 3, 10, MakeStubBundle(), 100);
  ASSERT_EQ(report.games.size(), 3u);
  double nc = 0.0, gain = 0.0;
  for (size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(report.games[i].game_seed, 100 + i);
    nc += report.games[i].nash_conv / 3;
    gain += report.games[i].cfr_gain / 3;
  }
  EXPECT_NEAR(report.average.nash_conv, nc, 1e-12);
  EXPECT_NEAR(report.average.cfr_gain, gain, 1e-12);
  EXPECT_EQ(report.average.ess, IsEss(report.average.nash_conv,
                                      report.average.cfr_gain));
  EXPECT_EQ(report.SummaryCsv().substr(0, 35), "domain,nashconv,cfr_gain,ess\ndebate");
  EXPECT_EQ(ParseCsv(report.GamesCsv()).size(), 4u);
  const auto again =
      RunTable1Protocol(DomainId::kDebate, 3, 10, MakeStubBundle(), 100);
  EXPECT_EQ(again.GamesCsv(), report.GamesCsv());
}

TEST(Table1Test, ReferenceValuesAreStable) {
  // Reference NashConv and CFR gain per domain.
  EXPECT_TRUE(IsEss(0.024, 0.106));
  EXPECT_TRUE(IsEss(0.010, 0.037));
  EXPECT_TRUE(IsEss(0.009, 0.038));
}

}  // namespace
}  // namespace dialogue_games
