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

#include "dialogue_games/imitation.h"

#include <chrono>
#include <cmath>

#include <gtest/gtest.h>

#include "dialogue_games/cfr.h"
#include "dialogue_games/errors.h"
#include "dialogue_games/stub_backends.h"
#include "test_games.h"

namespace dialogue_games {
namespace {

using testing::BobSuzyFruitConfig;
using testing::Entropy;

double Norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> RandomUnit(Rng& rng, int d) {
  std::vector<double> v(d);
  for (double& x : v) x = 2 * UniformDouble(rng) - 1;
  const double n = Norm(v);
  for (double& x : v) x /= n;
  return v;
}

std::vector<double> RandomDistribution(Rng& rng, int n) {
  std::vector<double> v(n);
  double total = 0.0;
  for (double& x : v) total += (x = UniformDouble(rng) + 0.05);
  for (double& x : v) x /= total;
  return v;
}

TEST(EmbedderTest, Tokenize) {
  EXPECT_EQ(Tokenize("Hi Suzy, 1 banana!\nBest--Bob"),
            (std::vector<std::string>{"hi", "suzy", "1", "banana", "best",
                                      "bob"}));
  EXPECT_TRUE(Tokenize(" ,;! ").empty());
}

TEST(EmbedderTest, UnitNormAndDeterministic) {
  HashingEmbedder e(64);
  const auto a = e.Embed("calm seed 0 [Bob] hello there");
  EXPECT_EQ(a, e.Embed("calm seed 0 [Bob] hello there"));
  EXPECT_NEAR(Norm(a), 1.0, 1e-9);
  const auto empty = e.Embed("...");
  EXPECT_EQ(empty[0], 1.0);
  EXPECT_NEAR(Norm(empty), 1.0, 1e-15);
  EXPECT_THROW(HashingEmbedder(4), Error);
}

TEST(EmbedderTest, RawCountsFollowTheHashTrace) {
  HashingEmbedder e(32);
  const std::string text = "the quick brown fox jumps over the lazy dog";
  std::vector<double> want(32, 0.0);
  for (const auto& tok : Tokenize(text)) {
    want[HashingEmbedder::Index(tok, 32)] += HashingEmbedder::Sign(tok);
  }
  EXPECT_EQ(e.Raw(text), want);
  const auto a = e.Raw("alpha beta gamma delta");
  const auto b = e.Raw("alpha beta omega delta");
  int differing = 0;
  for (int i = 0; i < 32; ++i) differing += a[i] != b[i];
  EXPECT_LE(differing, 2);
}

TEST(DatasetTest, OneExamplePerDecisionInfostate) {
  const BackendBundle backends = MakeStubBundle();
  const GameConfig config = BobSuzyFruitConfig();
  HashingEmbedder embedder(32);
  const auto data = BuildDataset({config}, {5}, 10, backends, embedder);

  DialogueGame game(config, backends);
  const GameTree tree = GameTree::Build(game);
  ASSERT_EQ(data.size(), tree.infostates().size());
  EXPECT_EQ(tree.NumInfostates(1), 1);  // The receiver answers first.
  EXPECT_LE(tree.NumInfostates(0), 8);
  const TabularPolicy avg = CfrSolve(tree, 10);
  for (const auto& ex : data) {
    EXPECT_EQ(ex.game_seed, 5u);
    EXPECT_NEAR(Norm(ex.embedding), 1.0, 1e-9);
    double total = 0.0;
    for (double p : ex.target) total += p;
    EXPECT_NEAR(total, 1.0, 1e-9);
    EXPECT_EQ(ex.embedding, embedder.Embed(ex.infostate_key));
    const auto want = avg.Probabilities(ex.infostate_key, 4);
    for (size_t a = 0; a < want.size(); ++a) {
      EXPECT_NEAR(ex.target[a], want[a], 1e-12);
    }
  }
  const auto again = BuildDataset({config}, {5}, 10, backends, embedder);
  EXPECT_EQ(DatasetToJsonl(again), DatasetToJsonl(data));
}

TEST(DatasetTest, JsonlRoundTrip) {
  HashingEmbedder embedder(16);
  const auto data =
      BuildDataset(2, DomainId::kMeeting, 3, MakeStubBundle(), embedder, 40);
  ASSERT_FALSE(data.empty());
  const std::string text = DatasetToJsonl(data);
  const auto back = DatasetFromJsonl(text);
  ASSERT_EQ(back.size(), data.size());
  for (size_t i = 0; i < data.size(); ++i) {
    EXPECT_EQ(back[i].embedding, data[i].embedding);
    EXPECT_EQ(back[i].target, data[i].target);
    EXPECT_EQ(back[i].infostate_key, data[i].infostate_key);
    EXPECT_EQ(back[i].game_seed, data[i].game_seed);
  }
  EXPECT_EQ(DatasetToJsonl(back), text);
  EXPECT_THROW(DatasetFromJsonl("{\"embedding\": 3}\n"), Error);
}

TEST(MlpTest, ForwardProperties) {
  const MlpPolicy zero(16, 4, 8);
  Rng rng(1);
  const auto x = RandomUnit(rng, 16);
  for (double p : zero.Forward(x)) EXPECT_DOUBLE_EQ(p, 0.25);

  MlpPolicy net = MlpPolicy::Random(16, 5, 3, 8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto in = RandomUnit(rng, 16);
    const auto p = net.Forward(in);
    double total = 0.0;
    for (double v : p) {
      EXPECT_GT(v, 0.0);
      total += v;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    MlpPolicy shifted = net;
    shifted.b3.array() += 3.7;
    const auto q = shifted.Forward(in);
    for (size_t a = 0; a < p.size(); ++a) EXPECT_NEAR(q[a], p[a], 1e-12);
  }
  EXPECT_THROW(net.Forward(std::vector<double>(15, 0.0)), Error);
  EXPECT_EQ(net.NumParameters(), 16 * 8 + 8 + 8 * 8 + 8 + 8 * 5 + 5);
  EXPECT_EQ(static_cast<int64_t>(net.ParameterPointers().size()),
            net.NumParameters());
}

TEST(MlpTest, JsonRoundTrip) {
  const MlpPolicy net = MlpPolicy::Random(8, 3, 4, 6);
  const MlpPolicy back = MlpPolicy::FromJson(net.ToJson());
  EXPECT_EQ(back.ToJson().dump(), net.ToJson().dump());
  EXPECT_EQ(back.hidden(), 6);
}

TEST(CrossEntropyTest, Identities) {
  Rng rng(2);
  const MlpPolicy net = MlpPolicy::Random(16, 4, 9, 8);
  ImitationExample ex;
  ex.embedding = RandomUnit(rng, 16);
  ex.target = net.Forward(ex.embedding);
  const ImitationExample* one[] = {&ex};
  EXPECT_NEAR(CrossEntropyLossAndGrad(net, one).loss, Entropy(ex.target),
              1e-12);

  const MlpPolicy zero(16, 4, 8);
  ex.target = RandomDistribution(rng, 4);
  EXPECT_NEAR(CrossEntropyLossAndGrad(zero, one).loss, std::log(4.0), 1e-12);

  ImitationExample bad = ex;
  bad.target.push_back(0.0);
  const ImitationExample* wrong[] = {&bad};
  EXPECT_THROW(CrossEntropyLossAndGrad(zero, wrong), Error);
}

TEST(CrossEntropyTest, GradientsMatchFiniteDifferences) {
  Rng rng(3);
  MlpPolicy net = MlpPolicy::Random(16, 4, 11, 12);
  // Move the biases off zero so no hidden unit sits on a kink.
  for (int i = 0; i < net.b1.size(); ++i) net.b1(i) = 0.1 * UniformDouble(rng);
  for (int i = 0; i < net.b2.size(); ++i) net.b2(i) = 0.1 * UniformDouble(rng);
  std::vector<ImitationExample> data(5);
  for (auto& ex : data) {
    ex.embedding = RandomUnit(rng, 16);
    ex.target = RandomDistribution(rng, 4);
  }
  std::vector<const ImitationExample*> batch;
  for (const auto& ex : data) batch.push_back(&ex);
  batch.push_back(&data[0]);  // A repeated example counts twice.

  const LossAndGrad analytic = CrossEntropyLossAndGrad(net, batch);
  const auto grads = net.GradientPointers(analytic.grads);
  const auto params = net.ParameterPointers();
  ASSERT_EQ(grads.size(), params.size());
  const double h = 1e-5;
  double worst = 0.0;
  for (size_t i = 0; i < params.size(); ++i) {
    const double saved = *params[i];
    *params[i] = saved + h;
    const double up = CrossEntropyLossAndGrad(net, batch).loss;
    *params[i] = saved - h;
    const double down = CrossEntropyLossAndGrad(net, batch).loss;
    *params[i] = saved;
    const double numeric = (up - down) / (2 * h);
    const double scale = std::max({std::abs(numeric), std::abs(*grads[i]), 1e-3});
    worst = std::max(worst, std::abs(numeric - *grads[i]) / scale);
  }
  EXPECT_LE(worst, 1e-4);
}

TEST(TrainTest, MemorizesSingleExample) {
  Rng rng(4);
  ImitationExample ex;
  ex.embedding = RandomUnit(rng, 16);
  ex.target = {0.6, 0.3, 0.1};
  TrainConfig config;
  const auto start = std::chrono::steady_clock::now();
  const TrainResult r = Train(MlpPolicy::Random(16, 3, 5), {ex}, config);
  const double seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();
  EXPECT_LE(seconds, 120.0);
  ASSERT_EQ(r.loss_curve.size(), 100u);
  EXPECT_EQ(r.loss_curve.back().step, 10000);
  const ImitationExample* one[] = {&ex};
  const double final_loss = CrossEntropyLossAndGrad(r.policy, one).loss;
  EXPECT_LE(std::abs(final_loss - Entropy(ex.target)), 0.01);
}

TEST(TrainTest, SeparableDataLossTrendsDown) {
  // Two clusters with opposite one-hot targets.
  Rng rng(6);
  std::vector<ImitationExample> data;
  for (int i = 0; i < 64; ++i) {
    ImitationExample ex;
    ex.embedding = RandomUnit(rng, 16);
    ex.embedding[0] = i % 2 ? 3.0 : -3.0;
    ex.target = i % 2 ? std::vector<double>{1, 0} : std::vector<double>{0, 1};
    data.push_back(ex);
  }
  TrainConfig config;
  config.steps = 3000;
  config.batch_size = 32;
  const TrainResult r = Train(MlpPolicy::Random(16, 2, 8, 32), data, config);
  const auto& c = r.loss_curve;
  for (size_t i = 5; i + 5 <= c.size(); i += 5) {
    double prev = 0.0, cur = 0.0;
    for (size_t j = 0; j < 5; ++j) {
      prev += c[i - 5 + j].loss;
      cur += c[i + j].loss;
    }
    EXPECT_LE(cur, prev) << "window ending at step " << c[i + 4].step;
  }
  EXPECT_LT(c.back().loss, 0.05);
  const TrainResult again = Train(MlpPolicy::Random(16, 2, 8, 32), data, config);
  EXPECT_EQ(LossCurveCsv(again.loss_curve), LossCurveCsv(r.loss_curve));
}

TEST(TrainTest, NonFiniteLossAborts) {
  ImitationExample ex;
  ex.embedding.assign(8, NAN);
  ex.target = {0.5, 0.5};
  TrainConfig config;
  config.steps = 10;
  try {
    Train(MlpPolicy::Random(8, 2, 1, 4), {ex}, config);
    FAIL() << "expected NonFiniteLoss";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonFiniteLoss);
  }
  config.batch_size = 0;
  EXPECT_THROW(config.Validate(), Error);
}

TEST(MlpPolicyAdapterTest, EmbedsTheInfostate) {
  auto embedder = std::make_shared<HashingEmbedder>(16);
  auto mlp = std::make_shared<MlpPolicy>(MlpPolicy::Random(16, 4, 2, 8));
  MlpPolicyAdapter adapter(mlp, embedder);
  EXPECT_EQ(adapter.Probabilities("some key", 4),
            mlp->Forward(embedder->Embed("some key")));
  EXPECT_THROW(adapter.Probabilities("some key", 3), Error);
}

TEST(ElectionTest, DominantOptionWins) {
  const auto t = PayoffTensor::FromMatrices({{2, 2}, {1, 1}}, {{2, 1}, {2, 1}},
                                            {"im", "any"}, {"im", "any"});
  const auto r = ElectFromTensor(t, 2000);
  EXPECT_GE(r.selection[0], 0.99);
  EXPECT_NEAR(r.selection[0] + r.selection[1], 1.0, 1e-9);
}

TEST(ElectionTest, SymmetricTensorGivesSymmetricMarginals) {
  const auto t = PayoffTensor::FromMatrices({{1, 3}, {0, 2}}, {{1, 0}, {3, 2}});
  const auto r = ElectFromTensor(t, 500);
  const auto m0 = r.joint.Marginal(0), m1 = r.joint.Marginal(1);
  for (int i = 0; i < 2; ++i) {
    EXPECT_NEAR(m0[i], m1[i], 1e-12);
    EXPECT_NEAR(r.selection[i], m0[i], 1e-12);
  }
}

TEST(ElectionTest, TensorIsMeanExactReturn) {
  const BackendBundle backends = MakeStubBundle();
  std::vector<GameConfig> games = {GenerateGameConfig(DomainId::kDebate, 1),
                                   GenerateGameConfig(DomainId::kDebate, 2)};
  for (auto& g : games) g.num_llm_seeds = 1;
  const int any = games[0].AnyActionIndex();
  std::vector<ElectionOption> options = {
      {"any", std::make_shared<FixedActionPolicy>(any)},
      {"first", std::make_shared<FixedActionPolicy>(0)}};
  const auto r = MetaGameElection(games, options, backends, 100);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      std::array<double, 2> want{};
      for (const auto& g : games) {
        DialogueGame game(g, backends);
        const GameTree tree = GameTree::Build(game);
        const auto v =
            ExpectedReturns(tree, {options[a].policy.get(), options[b].policy.get()});
        want[0] += v[0] / 2;
        want[1] += v[1] / 2;
      }
      EXPECT_NEAR(r.tensor.Payoff(0, a, b), want[0], 1e-12);
      EXPECT_NEAR(r.tensor.Payoff(1, a, b), want[1], 1e-12);
    }
  }
  EXPECT_THROW(MetaGameElection(games, {options[0]}, backends), Error);
}

}  // namespace
}  // namespace dialogue_games
