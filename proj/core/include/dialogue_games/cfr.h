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

#ifndef DIALOGUE_GAMES_CFR_H_
#define DIALOGUE_GAMES_CFR_H_

#include <vector>

#include "dialogue_games/game_tree.h"

namespace dialogue_games {

// Cumulative tables for one infostate of the solver.
struct RegretEntry {
  std::vector<double> cumulative_regret;
  std::vector<double> cumulative_strategy;  // Reach-weighted, non-negative.
};

// Vanilla CFR: full traversal each iteration with simultaneous updates for
// all players. Current strategies come from regret matching (positive part
// of the cumulative regrets, uniform when none is positive); the average
// strategy accumulates current strategies weighted by the player's own
// reach probability.
class CfrSolver {
 public:
  explicit CfrSolver(const GameTree& tree);

  void RunIteration();
  int iterations() const { return iterations_; }

  TabularPolicy AveragePolicy() const;
  TabularPolicy CurrentPolicy() const;
  const std::vector<RegretEntry>& regrets() const { return regrets_; }

 private:
  std::vector<double> Traverse(int node, std::vector<double>& reach);
  std::vector<double> RegretMatching(int infostate) const;

  const GameTree& tree_;
  std::vector<RegretEntry> regrets_;
  std::vector<std::vector<double>> current_;
  int iterations_ = 0;
};

// Average policy after the given number of iterations (at least 1).
TabularPolicy CfrSolve(const GameTree& tree, int iterations);

// Value of player's best pure deviation against the other players' fixed
// policy and the chance distribution, by backward induction over the
// player's infostates.
double BestResponseValue(const GameTree& tree, const Policy& policy,
                         int player);

// Sum over players of best-response value minus on-policy value.
double NashConv(const GameTree& tree, const Policy& policy);

// Per-player gain from switching from baseline to cfr_policy while the
// co-player stays on baseline.
std::vector<double> CfrGainPerPlayer(const GameTree& tree,
                                     const Policy& cfr_policy,
                                     const Policy& baseline);
// Mean of CfrGainPerPlayer.
double CfrGain(const GameTree& tree, const Policy& cfr_policy,
               const Policy& baseline);

// Approximate evolutionary stability: the gain from adopting the solver
// policy strictly exceeds the gain from deviating away from it.
bool IsEss(double nash_conv, double cfr_gain);

// The uninformative baseline: always the "any" instruction.
FixedActionPolicy BaselinePolicy(const GameConfig& config);

}  // namespace dialogue_games

#endif  // DIALOGUE_GAMES_CFR_H_
