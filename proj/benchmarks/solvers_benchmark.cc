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

#include <benchmark/benchmark.h>

#include "dialogue_games/cfr.h"
#include "dialogue_games/domains.h"
#include "dialogue_games/game_tree.h"
#include "dialogue_games/imitation.h"
#include "dialogue_games/normal_form.h"
#include "dialogue_games/stub_backends.h"
#include "dialogue_games/util.h"

namespace dialogue_games {
namespace {

void BM_TreeBuild(benchmark::State& state) {
  const auto domain = static_cast<DomainId>(state.range(0));
  const GameConfig config = GenerateGameConfig(domain, 1);
  const BackendBundle backends = MakeStubBundle();
  for (auto _ : state) {
    DialogueGame game(config, backends);
    benchmark::DoNotOptimize(GameTree::Build(game).NumLeaves());
  }
}
BENCHMARK(BM_TreeBuild)->DenseRange(0, 2)->Unit(benchmark::kMillisecond);

void BM_CfrIteration(benchmark::State& state) {
  DialogueGame game(GenerateGameConfig(DomainId::kFruit, 1), MakeStubBundle());
  const GameTree tree = GameTree::Build(game);
  CfrSolver solver(tree);
  for (auto _ : state) solver.RunIteration();
  state.counters["nodes"] = static_cast<double>(tree.nodes().size());
}
BENCHMARK(BM_CfrIteration)->Unit(benchmark::kMicrosecond);

void BM_NashConv(benchmark::State& state) {
  DialogueGame game(GenerateGameConfig(DomainId::kMeeting, 2), MakeStubBundle());
  const GameTree tree = GameTree::Build(game);
  const TabularPolicy policy = CfrSolve(tree, 100);
  for (auto _ : state) benchmark::DoNotOptimize(NashConv(tree, policy));
}
BENCHMARK(BM_NashConv)->Unit(benchmark::kMicrosecond);

PayoffTensor RandomTensor(int n) {
  Rng rng(n);
  std::vector<std::vector<double>> a(n, std::vector<double>(n)), b = a;
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      a[r][c] = UniformDouble(rng);
      b[r][c] = UniformDouble(rng);
    }
  }
  return PayoffTensor::FromMatrices(a, b);
}

void BM_NashBargaining(benchmark::State& state) {
  const PayoffTensor t = RandomTensor(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(NashBargaining(t).payoffs);
}
BENCHMARK(BM_NashBargaining)->Arg(3)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_RegretMatchingCce(benchmark::State& state) {
  const PayoffTensor t = RandomTensor(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(RegretMatchingCce(t, 10000).weights);
  }
}
BENCHMARK(BM_RegretMatchingCce)->Arg(3)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_MlpStep(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  HashingEmbedder embedder(dim);
  Rng rng(3);
  std::vector<ImitationExample> data(256);
  for (size_t i = 0; i < data.size(); ++i) {
    data[i].embedding = embedder.Embed("infostate " + std::to_string(i));
    data[i].target = {0.25, 0.25, 0.25, 0.25};
  }
  const MlpPolicy policy = MlpPolicy::Random(dim, 4, 1);
  std::vector<const ImitationExample*> batch(128);
  for (auto _ : state) {
    for (auto& ex : batch) ex = &data[UniformInt(rng, 0, 255)];
    benchmark::DoNotOptimize(CrossEntropyLossAndGrad(policy, batch).loss);
  }
}
BENCHMARK(BM_MlpStep)->Arg(16)->Arg(768)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace dialogue_games

BENCHMARK_MAIN();
