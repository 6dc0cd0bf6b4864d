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

#ifndef DIALOGUE_GAMES_IMITATION_H_
#define DIALOGUE_GAMES_IMITATION_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "dialogue_games/backends.h"
#include "dialogue_games/game_tree.h"
#include "dialogue_games/game_types.h"
#include "dialogue_games/normal_form.h"

namespace dialogue_games {

class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual int dimension() const = 0;
  // Unit L2 norm.
  virtual std::vector<double> Embed(std::string_view text) const = 0;
};

// Lowercased alphanumeric runs; everything else separates tokens.
std::vector<std::string> Tokenize(std::string_view text);

// Feature hashing: every token adds +-1 at Hash64(token) mod D, the sign
// taken from a second, salted hash. The sum is L2-normalized; an all-zero
// sum maps to the first basis vector.
class HashingEmbedder : public Embedder {
 public:
  // Throws Error(kConfigInvalid) for dimension < 8.
  explicit HashingEmbedder(int dimension = 768);
  int dimension() const override { return dimension_; }
  std::vector<double> Embed(std::string_view text) const override;
  // The accumulated counts before normalization.
  std::vector<double> Raw(std::string_view text) const;
  static int Index(std::string_view token, int dimension);
  static double Sign(std::string_view token);

 private:
  int dimension_;
};

struct ImitationExample {
  std::vector<double> embedding;
  std::vector<double> target;
  uint64_t game_seed = 0;
  std::string infostate_key;
};

// One example per decision infostate of each game: the embedded infostate
// key paired with the CFR average policy there.
std::vector<ImitationExample> BuildDataset(
    const std::vector<GameConfig>& games,
    const std::vector<uint64_t>& game_seeds, int cfr_iterations,
    const BackendBundle& backends, const Embedder& embedder);
// Games from GenerateGameConfig(domain, first_seed + i).
std::vector<ImitationExample> BuildDataset(int num_games, DomainId domain,
                                           int cfr_iterations,
                                           const BackendBundle& backends,
                                           const Embedder& embedder,
                                           uint64_t first_seed = 0);

// JSON lines: {"embedding": [...], "target": [...], "game_seed": n,
// "infostate_key": "..."}.
std::string DatasetToJsonl(const std::vector<ImitationExample>& dataset);
std::vector<ImitationExample> DatasetFromJsonl(std::string_view text);

struct MlpGradients {
  Eigen::MatrixXd w1, w2, w3;
  Eigen::VectorXd b1, b2, b3;
};

// D -> hidden -> hidden -> |A| with ReLU hidden layers and softmax output.
class MlpPolicy {
 public:
  // Zero parameters (uniform output).
  MlpPolicy(int input_dim, int num_actions, int hidden = 256);
  // Glorot-uniform weights, zero biases.
  static MlpPolicy Random(int input_dim, int num_actions, uint64_t seed,
                          int hidden = 256);

  int input_dim() const { return static_cast<int>(w1.cols()); }
  int num_actions() const { return static_cast<int>(w3.rows()); }
  int hidden() const { return static_cast<int>(w1.rows()); }
  int64_t NumParameters() const;

  // Throws Error(kShapeMismatch).
  std::vector<double> Forward(std::span<const double> embedding) const;

  // Visits every parameter in a fixed order (w1, b1, w2, b2, w3, b3; column
  // major); used by optimizers and finite-difference checks.
  std::vector<double*> ParameterPointers();
  std::vector<const double*> GradientPointers(const MlpGradients& g) const;

  // {"input_dim", "hidden", "num_actions", "w1": [[...]], "b1": [...], ...}
  nlohmann::json ToJson() const;
  static MlpPolicy FromJson(const nlohmann::json& json);

  Eigen::MatrixXd w1, w2, w3;
  Eigen::VectorXd b1, b2, b3;
};

struct LossAndGrad {
  double loss = 0.0;
  MlpGradients grads;
};

inline constexpr double kLogClamp = 1e-12;

// Mean soft-target cross entropy -sum_a t_a log(max(p_a, 1e-12)) over the
// batch, with its analytic gradient. Throws Error(kShapeMismatch).
LossAndGrad CrossEntropyLossAndGrad(
    const MlpPolicy& policy,
    std::span<const ImitationExample* const> batch);

struct TrainConfig {
  int steps = 10'000;
  int batch_size = 128;
  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  uint64_t rng_seed = 0;
  int log_every = 100;

  // Throws Error(kConfigInvalid).
  void Validate() const;
};

struct LossPoint {
  int step = 0;
  double loss = 0.0;
};

struct TrainResult {
  MlpPolicy policy;
  std::vector<LossPoint> loss_curve;
};

// Adam with bias correction on minibatches drawn uniformly with
// replacement. Throws Error(kNonFiniteLoss) (message carries the trace so
// far) when a batch loss is not finite.
TrainResult Train(MlpPolicy policy, const std::vector<ImitationExample>& data,
                  const TrainConfig& config);

// "step,loss" lines.
std::string LossCurveCsv(const std::vector<LossPoint>& curve);

// Behavioural policy that embeds the infostate key and runs the network.
class MlpPolicyAdapter : public Policy {
 public:
  MlpPolicyAdapter(std::shared_ptr<const MlpPolicy> mlp,
                   std::shared_ptr<const Embedder> embedder);
  std::vector<double> Probabilities(std::string_view infostate,
                                    int num_actions) const override;

 private:
  std::shared_ptr<const MlpPolicy> mlp_;
  std::shared_ptr<const Embedder> embedder_;
};

struct ElectionOption {
  std::string name;
  std::shared_ptr<const Policy> policy;
};

struct ElectionResult {
  PayoffTensor tensor;
  JointDistribution joint;
  // Mean of the two players' marginal mass per option.
  std::vector<double> selection;
};

// Entry (a, b) is the mean over games of the exact expected returns with
// player 0 acting by option a and player 1 by option b; the resulting
// meta-game is solved by regret matching.
ElectionResult MetaGameElection(const std::vector<GameConfig>& games,
                                const std::vector<ElectionOption>& options,
                                const BackendBundle& backends,
                                int cce_iterations = 10'000);
ElectionResult ElectFromTensor(const PayoffTensor& tensor,
                               int cce_iterations = 10'000);

}  // namespace dialogue_games

#endif  // DIALOGUE_GAMES_IMITATION_H_
