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

#ifndef DIALOGUE_GAMES_GAME_TREE_H_
#define DIALOGUE_GAMES_GAME_TREE_H_

#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "dialogue_games/dialogue_game.h"

namespace dialogue_games {

// Behavioural strategy: a distribution over action indices per infostate.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::vector<double> Probabilities(std::string_view infostate,
                                            int num_actions) const = 0;
};

// Explicit table; infostates that are absent play uniformly.
class TabularPolicy : public Policy {
 public:
  // Throws Error(kConfigInvalid) unless probs is a distribution (1e-9).
  void Set(const std::string& infostate, std::vector<double> probs);
  std::vector<double> Probabilities(std::string_view infostate,
                                    int num_actions) const override;
  bool Contains(const std::string& infostate) const;
  const std::map<std::string, std::vector<double>, std::less<>>& table()
      const {
    return table_;
  }

  // {"<infostate key>": [p0, p1, ...], ...}
  nlohmann::json ToJson() const;
  static TabularPolicy FromJson(const nlohmann::json& json);

 private:
  std::map<std::string, std::vector<double>, std::less<>> table_;
};

// One-hot on a fixed action at every infostate.
class FixedActionPolicy : public Policy {
 public:
  explicit FixedActionPolicy(int action) : action_(action) {}
  std::vector<double> Probabilities(std::string_view infostate,
                                    int num_actions) const override;

 private:
  int action_;
};

class UniformPolicy : public Policy {
 public:
  std::vector<double> Probabilities(std::string_view infostate,
                                    int num_actions) const override;
};

struct TreeNode {
  NodeKind::Type type = NodeKind::kTerminal;
  int player = -1;
  int infostate = -1;  // Index into GameTree::infostates() at decisions.
  std::vector<int> children;
  std::vector<double> chance_probs;  // Chance nodes only.
  std::vector<double> returns;       // Terminal nodes only.
};

struct TreeInfostate {
  int player = 0;
  std::string key;
  int num_actions = 0;
  std::vector<int> nodes;
};

// The whole game tree, expanded once through the DialogueGame (and thus
// through its backends); solvers then run on plain arrays.
class GameTree {
 public:
  static GameTree Build(const DialogueGame& game);

  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const std::vector<TreeInfostate>& infostates() const { return infostates_; }
  int num_players() const { return num_players_; }
  int num_actions() const { return num_actions_; }
  int root() const { return 0; }
  int NumLeaves() const;
  int NumInfostates(int player) const;
  // -1 if absent.
  int FindInfostate(std::string_view key) const;

  // Per-infostate action distributions of a policy, indexed like
  // infostates().
  std::vector<std::vector<double>> Materialize(const Policy& policy) const;

 private:
  int num_players_ = 2;
  int num_actions_ = 0;
  std::vector<TreeNode> nodes_;
  std::vector<TreeInfostate> infostates_;
  std::unordered_map<std::string, int> infostate_index_;
};

// Expected returns when player p follows *profile[p].
std::vector<double> ExpectedReturns(const GameTree& tree,
                                    const std::vector<const Policy*>& profile);
std::vector<double> ExpectedReturns(const GameTree& tree,
                                    const Policy& policy);

}  // namespace dialogue_games

#endif  // DIALOGUE_GAMES_GAME_TREE_H_
