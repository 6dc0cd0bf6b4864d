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

#ifndef DIALOGUE_GAMES_STUB_BACKENDS_H_
#define DIALOGUE_GAMES_STUB_BACKENDS_H_

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dialogue_games/backends.h"

namespace dialogue_games {

// Marker the stub generator appends to every message and the stub
// classifier looks for: "[[action:<label>]]".
std::string ActionMarker(std::string_view label);
// Label inside the last marker in text, or empty if there is none.
std::string FindActionMarker(std::string_view text);

struct StubProfile {
  double follow_rate = 1.0;
  // Templated message bodies per domain. Placeholders: {sender},
  // {receiver}, {n1}, {f1}, {n2}, {f2}, {day}, {label}.
  std::map<DomainId, std::vector<std::string>> message_bank;

  // Message bank from the stub_messages.json asset.
  static StubProfile Default(double follow_rate = 1.0);
  // Throws Error(kConfigInvalid).
  void Validate() const;
};

// Deterministic stand-in for a dialogue model. The output is a pure function
// of Hash64(prompt || seed) and the profile: the hash decides whether the
// instruction is followed (probability follow_rate), which other label is
// expressed otherwise, which message body is used and how it is filled.
class StubGenerator : public TextGenerator {
 public:
  explicit StubGenerator(StubProfile profile);
  std::string Generate(const GenerationRequest& request) override;

  // The label whose marker Generate() embeds for this request.
  std::string ExpressedLabel(const GenerationRequest& request) const;

 private:
  StubProfile profile_;
};

// One-hot on the label of the embedded marker; uniform without a marker or
// when the marker names a label outside the menu.
class StubClassifier : public ActionClassifier {
 public:
  std::vector<double> Classify(std::string_view message,
                               std::span<const std::string> labels) override;
};

// Ends a dialogue when the last message accepts or rejects the standing
// offer (domain phrase lists in domains.h). Debates never end early.
class RuleTerminator : public TerminationJudge {
 public:
  bool IsTerminal(const Transcript& transcript,
                  const GameConfig& config) override;
};

// Replays recorded generations. Requests are matched on
// (HexHash(Hash64(prompt)), seed); unmatched requests take a fallback entry
// chosen by hash, or fail with kBackendFailure when there is none.
//
// Fixture: {"responses": [{"prompt_hash": "...", "seed": 0, "text": "..."}],
//           "fallback": ["...", ...]}
class ScriptedGenerator : public TextGenerator {
 public:
  explicit ScriptedGenerator(std::vector<std::string> fallback);
  static std::unique_ptr<ScriptedGenerator> FromJson(
      const nlohmann::json& fixture);

  void AddResponse(std::string_view prompt, int seed, std::string text);
  std::string Generate(const GenerationRequest& request) override;

 private:
  std::map<std::pair<std::string, int>, std::string> responses_;
  std::vector<std::string> fallback_;
};

// Replays recorded classifications keyed by HexHash(Hash64(message)).
// Fixture: {"answers": {"<message hash>": "<label>"}}
class ScriptedClassifier : public ActionClassifier {
 public:
  explicit ScriptedClassifier(std::map<std::string, std::string> answers);
  static std::unique_ptr<ScriptedClassifier> FromJson(
      const nlohmann::json& fixture);
  std::vector<double> Classify(std::string_view message,
                               std::span<const std::string> labels) override;

 private:
  std::map<std::string, std::string> answers_;
};

// Rewards looked up from the instruction labels each player chose, e.g. a
// matrix game embedded as a dialogue. Key: each player's label sequence
// joined with ',' (one entry per player).
class PayoffTableReward : public RewardModel {
 public:
  using Table = std::map<std::vector<std::string>, std::vector<double>>;
  explicit PayoffTableReward(Table table);
  RewardJudgment Score(const Transcript& transcript,
                       const GameConfig& config) override;
  bool UsesDecisions() const override { return true; }

 private:
  Table table_;
};

// Pseudo-random rewards in [low, high], a pure function of the full
// history (decisions and messages). Generates random general-sum games.
class HashedReward : public RewardModel {
 public:
  HashedReward(uint64_t salt, double low, double high);
  RewardJudgment Score(const Transcript& transcript,
                       const GameConfig& config) override;
  bool UsesDecisions() const override { return true; }

 private:
  uint64_t salt_;
  double low_;
  double high_;
};

// Memoizes another generator on (prompt, seed, context); only valid for
// deterministic backends. Safe for concurrent use.
class CachingGenerator : public TextGenerator {
 public:
  explicit CachingGenerator(std::shared_ptr<TextGenerator> inner);
  std::string Generate(const GenerationRequest& request) override;
  int64_t backend_calls() const { return backend_calls_.load(); }

 private:
  std::shared_ptr<TextGenerator> inner_;
  std::mutex mu_;
  std::unordered_map<std::string, std::string> cache_;
  std::atomic<int64_t> backend_calls_{0};
};

// Never ends a dialogue early; the reply cap decides.
class DepthCapTerminator : public TerminationJudge {
 public:
  bool IsTerminal(const Transcript&, const GameConfig&) override {
    return false;
  }
};

// Stub generator and classifier, rule terminator, oracle reward.
BackendBundle MakeStubBundle(double follow_rate = 1.0);

// A two-player matrix game played as a dialogue. Player 0 answers the
// opening message, then player 1; the generator always writes the same
// text, so player 1 cannot see player 0's instruction. The "any" label is
// appended and pays like the uniform mix over the other labels.
struct EmbeddedMatrixGame {
  GameConfig config;
  BackendBundle backends;
};
// row[i][j] and col[i][j] are the payoffs when player 0 plays labels[i]
// and player 1 plays labels[j]. Throws Error(kShapeMismatch).
EmbeddedMatrixGame MakeEmbeddedMatrixGame(
    const std::vector<std::string>& labels,
    const std::vector<std::vector<double>>& row,
    const std::vector<std::vector<double>>& col);
EmbeddedMatrixGame MatchingPennies();
EmbeddedMatrixGame RockPaperScissors();

}  // namespace dialogue_games

#endif  // DIALOGUE_GAMES_STUB_BACKENDS_H_
