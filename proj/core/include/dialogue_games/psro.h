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

#ifndef DIALOGUE_GAMES_PSRO_H_
#define DIALOGUE_GAMES_PSRO_H_

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dialogue_games/backends.h"
#include "dialogue_games/game_types.h"
#include "dialogue_games/normal_form.h"

namespace dialogue_games {

struct Candidate {
  std::string label;
  std::optional<double> score;
};

// Per-player instruction sets; labels are unique per player after
// NormalizeLabel and only ever appended.
struct CandidateSet {
  std::array<std::vector<Candidate>, 2> players;

  static CandidateSet Initial(const std::vector<std::string>& labels);
  bool Contains(int player, std::string_view label) const;
  // Returns false (and changes nothing) when the label is already present.
  bool Add(int player, const std::string& label);
  std::vector<std::string> Labels(int player) const;
};

// The games candidates are scored on: one scenario per seed, with the
// domain defaults for header and utility range.
struct GameFamily {
  DomainId domain = DomainId::kFruit;
  std::vector<uint64_t> scenario_seeds;
  int num_llm_seeds = 2;
  int num_max_replies = 1;

  // Game for scenario index with the given action menu ("any" is appended
  // when missing).
  GameConfig Config(int index, const std::vector<std::string>& labels) const;
};

// Mean returns of rollouts_per_cell dialogues per label pair, each player
// forced to its instruction at every decision. Rollout r uses scenario
// r mod S and the chance-seed tuple given by the base-num_llm_seeds digits
// of r / S, so S * seeds^depth rollouts enumerate every outcome once.
PayoffTensor EstimatePayoffTensor(
    const std::array<std::vector<std::string>, 2>& labels,
    const GameFamily& family, const BackendBundle& backends,
    int rollouts_per_cell);

struct ProposalRequest {
  int player = 0;
  // Existing candidates (or categories) in ascending score order.
  std::vector<Candidate> ranked;
  int count = 1;
  // Set when asking for labels inside a freshly proposed category.
  std::string category;
  bool propose_categories = false;
};

// Source of new instruction strings for the best-response operators.
class Proposer {
 public:
  virtual ~Proposer() = default;
  virtual std::vector<std::string> Propose(const ProposalRequest& request) = 0;
};

// Emits a fixed script, one cursor per player (or per category), and
// records every request it receives. Exhausted scripts return nothing.
class ScriptedProposer : public Proposer {
 public:
  explicit ScriptedProposer(std::vector<std::string> script);
  // Labels per category name for categorical best responses.
  void SetCategoryScript(const std::string& category,
                         std::vector<std::string> labels);
  std::vector<std::string> Propose(const ProposalRequest& request) override;
  const std::vector<ProposalRequest>& requests() const { return requests_; }

 private:
  std::vector<std::string> script_;
  std::map<int, size_t> cursor_;
  std::map<std::string, std::vector<std::string>> category_scripts_;
  std::map<std::string, size_t> category_cursor_;
  std::vector<ProposalRequest> requests_;
};

// Asks a generation backend to continue a ranked list (proposer_list.txt)
// and parses one item per output line.
class LlmProposer : public Proposer {
 public:
  LlmProposer(std::shared_ptr<TextGenerator> generator, std::string kind,
              uint64_t seed = 0);
  std::vector<std::string> Propose(const ProposalRequest& request) override;
  static std::string BuildPrompt(const ProposalRequest& request,
                                 std::string_view kind);
  static std::vector<std::string> ParseList(std::string_view text);

 private:
  std::shared_ptr<TextGenerator> generator_;
  std::string kind_;
  uint64_t seed_;
  int calls_ = 0;
};

// Scores a label for the focal player against the co-player meta-strategy.
using Evaluator = std::function<double(const std::string& label)>;

struct BrResult {
  Candidate candidate;
  bool improved = true;  // Better response only.
  bool novel = true;
};

inline constexpr int kProposalAttemptsPerCandidate = 5;

// Generates k novel labels (at most 5k proposals), scores each, returns the
// best; ties go to the first generated. Throws Error(kProposerExhausted)
// when no novel label appears.
BrResult BrShotgun(int player, const std::vector<Candidate>& current, int k,
                   Proposer& proposer, const Evaluator& evaluator);

// Proposes and scores one label at a time until one beats current_score or
// max_attempts proposals were made; then the best novel label seen is
// returned with improved = false (novel = false if there was none).
BrResult BrBetter(int player, const std::vector<Candidate>& current,
                  double current_score, Proposer& proposer,
                  const Evaluator& evaluator, int max_attempts);

// Hands the proposer the current candidates in ascending score order and
// returns the best of the k novel labels it produces.
BrResult BrTrajectory(int player, const std::vector<Candidate>& scored, int k,
                      Proposer& proposer, const Evaluator& evaluator);

struct Category {
  std::string name;
  double score = 0.0;  // Mean score of its labels.
  std::vector<Candidate> labels;
};

struct CategoricalResult {
  Category category;
  Candidate best_label;
};

// Proposes k_prime new categories from the ascending-ranked ones, k labels
// for each, and returns the category with the highest mean label score
// (first generated on ties) with its best label.
CategoricalResult BrCategorical(int player,
                                const std::vector<Category>& categories,
                                const std::vector<Candidate>& existing, int k,
                                int k_prime, Proposer& proposer,
                                const Evaluator& evaluator);

enum class BrOperator { kShotgun, kBetter, kTrajectory, kCategorical };
std::string_view BrOperatorName(BrOperator op);
BrOperator ParseBrOperator(std::string_view name);

enum class AppendMode {
  kPerPlayer,         // Every player appends its own novel response.
  kSharedFirstNovel,  // One shared set; the first novel response is added.
};

struct PsroConfig {
  BrOperator br_operator = BrOperator::kShotgun;
  int k = 1;
  int k_prime = 1;
  int max_outer_iterations = 3;
  int rollouts_per_cell = 4;
  MetaSolver meta_solver = MetaSolver::kReplicatorDynamics;
  MetaSolverOptions meta_options;
  AppendMode append_mode = AppendMode::kPerPlayer;
  int better_max_attempts = 10;

  // Throws Error(kConfigInvalid).
  void Validate() const;
};

// What a response oracle sees at one outer iteration.
struct PsroContext {
  int iteration = 0;
  const CandidateSet* candidates = nullptr;
  const PayoffTensor* tensor = nullptr;
  const JointDistribution* meta_strategy = nullptr;
  Evaluator evaluator;  // For the focal player.
};

class ResponseOracle {
 public:
  virtual ~ResponseOracle() = default;
  // A label for the player; returning an existing label signals that no
  // improving response was found.
  virtual std::string Respond(int player, const PsroContext& context) = 0;
};

// Runs the configured best-response operator. ProposerExhausted is treated
// as "no new response": the best existing candidate is returned.
class OperatorResponseOracle : public ResponseOracle {
 public:
  OperatorResponseOracle(const PsroConfig& config, Proposer& proposer);
  std::string Respond(int player, const PsroContext& context) override;

 private:
  PsroConfig config_;
  Proposer& proposer_;
  std::array<std::vector<Category>, 2> categories_;
};

struct PsroIteration {
  int iteration = 0;
  CandidateSet candidates;
  PayoffTensor tensor;
  JointDistribution meta_strategy;
  std::array<std::string, 2> responses;  // Empty at the final record.
  std::vector<std::string> new_candidates;
};

struct PsroTrace {
  std::vector<PsroIteration> iterations;
  bool converged = false;  // Stopped because every response already existed.

  nlohmann::json ToJson() const;
  // iteration,player,label,mass per current candidate.
  std::string MarginalsCsv() const;
};

using TensorEstimator = std::function<PayoffTensor(
    const std::array<std::vector<std::string>, 2>& labels)>;

// Outer loop: tensor -> meta-strategy -> responses; stops when every
// response is already in its player's set or after max_outer_iterations
// response rounds.
PsroTrace RunPsro(const PsroConfig& config, const CandidateSet& initial,
                  const TensorEstimator& estimator, ResponseOracle& oracle);

// Convenience wiring: tensors by EstimatePayoffTensor over the family,
// responses by OperatorResponseOracle with the given proposer.
PsroTrace RunPsro(const PsroConfig& config, const CandidateSet& initial,
                  const GameFamily& family, const BackendBundle& backends,
                  Proposer& proposer);

}  // namespace dialogue_games

#endif  // DIALOGUE_GAMES_PSRO_H_
