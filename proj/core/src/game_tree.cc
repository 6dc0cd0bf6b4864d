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

#include "dialogue_games/game_tree.h"

#include <cmath>
#include <functional>

#include "dialogue_games/errors.h"

namespace dialogue_games {

void TabularPolicy::Set(const std::string& infostate,
                        std::vector<double> probs) {
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0)) {
      throw Error(ErrorCode::kConfigInvalid,
                  "negative or NaN probability at " + infostate);
    }
    total += p;
  }
  if (probs.empty() || std::abs(total - 1.0) > 1e-9) {
    throw Error(ErrorCode::kConfigInvalid,
                "probabilities do not sum to one at " + infostate);
  }
  table_[infostate] = std::move(probs);
}

std::vector<double> TabularPolicy::Probabilities(std::string_view infostate,
                                                 int num_actions) const {
  auto it = table_.find(infostate);
  if (it == table_.end()) return std::vector<double>(num_actions, 1.0 / num_actions);
  if (static_cast<int>(it->second.size()) != num_actions) {
    throw Error(ErrorCode::kShapeMismatch,
                "policy has " + std::to_string(it->second.size()) +
                    " actions, game has " + std::to_string(num_actions));
  }
  return it->second;
}

bool TabularPolicy::Contains(const std::string& infostate) const {
  return table_.count(infostate) > 0;
}

nlohmann::json TabularPolicy::ToJson() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, probs] : table_) j[key] = probs;
  return j;
}

TabularPolicy TabularPolicy::FromJson(const nlohmann::json& json) {
  if (!json.is_object()) {
    throw Error(ErrorCode::kConfigInvalid, "policy must be a JSON object");
  }
  TabularPolicy policy;
  for (const auto& [key, probs] : json.items()) {
    try {
      policy.Set(key, probs.get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kConfigInvalid,
                  std::string("policy entry: ") + e.what());
    }
  }
  return policy;
}

std::vector<double> FixedActionPolicy::Probabilities(
    std::string_view /*infostate*/, int num_actions) const {
  if (action_ < 0 || action_ >= num_actions) {
    throw Error(ErrorCode::kShapeMismatch,
                "fixed action " + std::to_string(action_) + " out of range");
  }
  std::vector<double> probs(num_actions, 0.0);
  probs[action_] = 1.0;
  return probs;
}

std::vector<double> UniformPolicy::Probabilities(std::string_view /*infostate*/,
                                                 int num_actions) const {
  return std::vector<double>(num_actions, 1.0 / num_actions);
}

GameTree GameTree::Build(const DialogueGame& game) {
  GameTree tree;
  tree.num_players_ = game.num_players();
  tree.num_actions_ = game.num_actions();
  std::function<int(const DialogueState&)> expand =
      [&](const DialogueState& state) -> int {
    const int index = static_cast<int>(tree.nodes_.size());
    tree.nodes_.emplace_back();
    const NodeKind kind = game.Kind(state);
    TreeNode node;
    node.type = kind.type;
    node.player = kind.player;
    if (kind.type == NodeKind::kTerminal) {
      node.returns = game.Returns(state);
    } else if (kind.type == NodeKind::kChance) {
      for (const auto& [seed, prob] : game.ChanceOutcomes(state)) {
        node.children.push_back(expand(game.ApplyAction(state, seed)));
        node.chance_probs.push_back(prob);
      }
    } else {
      const std::string key = game.GetInfostateKey(state, kind.player).ToString();
      auto [it, inserted] = tree.infostate_index_.emplace(
          key, static_cast<int>(tree.infostates_.size()));
      if (inserted) {
        tree.infostates_.push_back(
            TreeInfostate{kind.player, key, game.num_actions(), {}});
      }
      node.infostate = it->second;
      tree.infostates_[node.infostate].nodes.push_back(index);
      for (int a : game.LegalActions(state)) {
        node.children.push_back(expand(game.ApplyAction(state, a)));
      }
    }
    tree.nodes_[index] = std::move(node);
    return index;
  };
  expand(game.NewInitialState());
  return tree;
}

int GameTree::NumLeaves() const {
  int leaves = 0;
  for (const auto& n : nodes_) leaves += n.type == NodeKind::kTerminal;
  return leaves;
}

int GameTree::NumInfostates(int player) const {
  int count = 0;
  for (const auto& s : infostates_) count += s.player == player;
  return count;
}

int GameTree::FindInfostate(std::string_view key) const {
  auto it = infostate_index_.find(std::string(key));
  return it == infostate_index_.end() ? -1 : it->second;
}

std::vector<std::vector<double>> GameTree::Materialize(
    const Policy& policy) const {
  std::vector<std::vector<double>> out;
  out.reserve(infostates_.size());
  for (const auto& s : infostates_) {
    out.push_back(policy.Probabilities(s.key, s.num_actions));
    if (static_cast<int>(out.back().size()) != s.num_actions) {
      throw Error(ErrorCode::kShapeMismatch, "policy returned wrong arity");
    }
  }
  return out;
}

std::vector<double> ExpectedReturns(const GameTree& tree,
                                    const std::vector<const Policy*>& profile) {
  if (static_cast<int>(profile.size()) != tree.num_players()) {
    throw Error(ErrorCode::kShapeMismatch, "need one policy per player");
  }
  std::vector<std::vector<std::vector<double>>> tables;
  for (const Policy* p : profile) tables.push_back(tree.Materialize(*p));
  const auto& nodes = tree.nodes();
  std::function<std::vector<double>(int)> value =
      [&](int n) -> std::vector<double> {
    const TreeNode& node = nodes[n];
    if (node.type == NodeKind::kTerminal) return node.returns;
    std::vector<double> total(tree.num_players(), 0.0);
    for (size_t i = 0; i < node.children.size(); ++i) {
      const double w = node.type == NodeKind::kChance
                           ? node.chance_probs[i]
                           : tables[node.player][node.infostate][i];
      if (w == 0.0) continue;
      const auto child = value(node.children[i]);
      for (int p = 0; p < tree.num_players(); ++p) total[p] += w * child[p];
    }
    return total;
  };
  return value(tree.root());
}

std::vector<double> ExpectedReturns(const GameTree& tree,
                                    const Policy& policy) {
  std::vector<const Policy*> profile(tree.num_players(), &policy);
  return ExpectedReturns(tree, profile);
}

}  // namespace dialogue_games
