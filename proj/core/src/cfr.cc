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

#include "dialogue_games/cfr.h"

#include <functional>

#include "dialogue_games/errors.h"

namespace dialogue_games {

CfrSolver::CfrSolver(const GameTree& tree) : tree_(tree) {
  for (const auto& s : tree.infostates()) {
    regrets_.push_back({std::vector<double>(s.num_actions, 0.0),
                        std::vector<double>(s.num_actions, 0.0)});
  }
  current_.resize(regrets_.size());
}

std::vector<double> CfrSolver::RegretMatching(int infostate) const {
  const auto& r = regrets_[infostate].cumulative_regret;
  std::vector<double> probs(r.size(), 0.0);
  double total = 0.0;
  for (size_t a = 0; a < r.size(); ++a) {
    probs[a] = r[a] > 0.0 ? r[a] : 0.0;
    total += probs[a];
  }
  if (total <= 0.0) {
    std::fill(probs.begin(), probs.end(), 1.0 / r.size());
  } else {
    for (double& p : probs) p /= total;
  }
  return probs;
}

void CfrSolver::RunIteration() {
  // Every player's strategy is fixed for the whole traversal.
  for (size_t i = 0; i < regrets_.size(); ++i) current_[i] = RegretMatching(i);
  // reach[p] for each player, last slot for chance.
  std::vector<double> reach(tree_.num_players() + 1, 1.0);
  Traverse(tree_.root(), reach);
  ++iterations_;
}

std::vector<double> CfrSolver::Traverse(int n, std::vector<double>& reach) {
  const TreeNode& node = tree_.nodes()[n];
  const int players = tree_.num_players();
  if (node.type == NodeKind::kTerminal) return node.returns;
  std::vector<double> value(players, 0.0);
  if (node.type == NodeKind::kChance) {
    for (size_t i = 0; i < node.children.size(); ++i) {
      const double saved = reach[players];
      reach[players] *= node.chance_probs[i];
      const auto child = Traverse(node.children[i], reach);
      reach[players] = saved;
      for (int p = 0; p < players; ++p) value[p] += node.chance_probs[i] * child[p];
    }
    return value;
  }
  const int player = node.player;
  const auto& sigma = current_[node.infostate];
  std::vector<std::vector<double>> child_values(node.children.size());
  for (size_t a = 0; a < node.children.size(); ++a) {
    const double saved = reach[player];
    reach[player] *= sigma[a];
    child_values[a] = Traverse(node.children[a], reach);
    reach[player] = saved;
    for (int p = 0; p < players; ++p) value[p] += sigma[a] * child_values[a][p];
  }
  double counterfactual = 1.0;
  for (int q = 0; q <= players; ++q) {
    if (q != player) counterfactual *= reach[q];
  }
  auto& entry = regrets_[node.infostate];
  for (size_t a = 0; a < node.children.size(); ++a) {
    entry.cumulative_regret[a] +=
        counterfactual * (child_values[a][player] - value[player]);
    entry.cumulative_strategy[a] += reach[player] * sigma[a];
  }
  return value;
}

TabularPolicy CfrSolver::AveragePolicy() const {
  TabularPolicy policy;
  const auto& infostates = tree_.infostates();
  for (size_t i = 0; i < infostates.size(); ++i) {
    const auto& s = regrets_[i].cumulative_strategy;
    double total = 0.0;
    for (double x : s) total += x;
    std::vector<double> probs(s.size(), 1.0 / s.size());
    if (total > 0.0) {
      for (size_t a = 0; a < s.size(); ++a) probs[a] = s[a] / total;
    }
    policy.Set(infostates[i].key, std::move(probs));
  }
  return policy;
}

TabularPolicy CfrSolver::CurrentPolicy() const {
  TabularPolicy policy;
  const auto& infostates = tree_.infostates();
  for (size_t i = 0; i < infostates.size(); ++i) {
    policy.Set(infostates[i].key, RegretMatching(i));
  }
  return policy;
}

TabularPolicy CfrSolve(const GameTree& tree, int iterations) {
  if (iterations < 1) {
    throw Error(ErrorCode::kConfigInvalid, "CFR needs at least one iteration");
  }
  CfrSolver solver(tree);
  for (int t = 0; t < iterations; ++t) solver.RunIteration();
  return solver.AveragePolicy();
}

double BestResponseValue(const GameTree& tree, const Policy& policy,
                         int player) {
  const auto& nodes = tree.nodes();
  const auto table = tree.Materialize(policy);

  // Probability of reaching each node from chance and co-player moves only.
  std::vector<double> cf_reach(nodes.size(), 0.0);
  std::function<void(int, double)> forward = [&](int n, double r) {
    cf_reach[n] = r;
    const TreeNode& node = nodes[n];
    for (size_t i = 0; i < node.children.size(); ++i) {
      double w = 1.0;
      if (node.type == NodeKind::kChance) {
        w = node.chance_probs[i];
      } else if (node.player != player) {
        w = table[node.infostate][i];
      }
      forward(node.children[i], r * w);
    }
  };
  forward(tree.root(), 1.0);

  std::vector<int> best_action(tree.infostates().size(), -1);
  std::function<double(int)> value;
  std::function<int(int)> best = [&](int infostate) -> int {
    if (best_action[infostate] >= 0) return best_action[infostate];
    const auto& s = tree.infostates()[infostate];
    int arg = 0;
    double best_q = 0.0;
    for (int a = 0; a < s.num_actions; ++a) {
      double q = 0.0;
      for (int h : s.nodes) {
        if (cf_reach[h] == 0.0) continue;
        q += cf_reach[h] * value(nodes[h].children[a]);
      }
      if (a == 0 || q > best_q) {
        best_q = q;
        arg = a;
      }
    }
    best_action[infostate] = arg;
    return arg;
  };
  value = [&](int n) -> double {
    const TreeNode& node = nodes[n];
    if (node.type == NodeKind::kTerminal) return node.returns[player];
    if (node.type == NodeKind::kDecision && node.player == player) {
      return value(node.children[best(node.infostate)]);
    }
    double total = 0.0;
    for (size_t i = 0; i < node.children.size(); ++i) {
      const double w = node.type == NodeKind::kChance
                           ? node.chance_probs[i]
                           : table[node.infostate][i];
      if (w != 0.0) total += w * value(node.children[i]);
    }
    return total;
  };
  return value(tree.root());
}

double NashConv(const GameTree& tree, const Policy& policy) {
  const auto on_policy = ExpectedReturns(tree, policy);
  double total = 0.0;
  for (int p = 0; p < tree.num_players(); ++p) {
    total += BestResponseValue(tree, policy, p) - on_policy[p];
  }
  return total;
}

std::vector<double> CfrGainPerPlayer(const GameTree& tree,
                                     const Policy& cfr_policy,
                                     const Policy& baseline) {
  const auto base = ExpectedReturns(tree, baseline);
  std::vector<double> gains;
  for (int p = 0; p < tree.num_players(); ++p) {
    std::vector<const Policy*> profile(tree.num_players(), &baseline);
    profile[p] = &cfr_policy;
    gains.push_back(ExpectedReturns(tree, profile)[p] - base[p]);
  }
  return gains;
}

double CfrGain(const GameTree& tree, const Policy& cfr_policy,
               const Policy& baseline) {
  const auto gains = CfrGainPerPlayer(tree, cfr_policy, baseline);
  double total = 0.0;
  for (double g : gains) total += g;
  return total / gains.size();
}

bool IsEss(double nash_conv, double cfr_gain) { return cfr_gain > nash_conv; }

FixedActionPolicy BaselinePolicy(const GameConfig& config) {
  const int any = config.AnyActionIndex();
  if (any < 0) {
    throw Error(ErrorCode::kConfigInvalid, "action menu has no \"any\" label");
  }
  return FixedActionPolicy(any);
}

}  // namespace dialogue_games
