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

#ifndef DIALOGUE_GAMES_NORMAL_FORM_H_
#define DIALOGUE_GAMES_NORMAL_FORM_H_

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace dialogue_games {

// Two-player normal-form game; cell (r, c) holds (u_row, u_col).
struct PayoffTensor {
  int rows = 0;
  int cols = 0;
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::array<double, 2>> values;  // Row-major.

  static PayoffTensor FromMatrices(
      const std::vector<std::vector<double>>& row_payoffs,
      const std::vector<std::vector<double>>& col_payoffs,
      std::vector<std::string> row_labels = {},
      std::vector<std::string> col_labels = {});

  double Payoff(int player, int row, int col) const {
    return values[row * cols + col][player];
  }
  int NumActions(int player) const { return player == 0 ? rows : cols; }

  // Throws Error(kShapeMismatch) or Error(kConfigInvalid).
  void Validate() const;

  // One line per cell: row_label,col_label,u1,u2 (with header).
  std::string ToCsv() const;
  static PayoffTensor FromCsv(std::string_view csv);
};

struct JointDistribution {
  int rows = 0;
  int cols = 0;
  std::vector<double> weights;  // Row-major.

  static JointDistribution Uniform(int rows, int cols);
  static JointDistribution Product(const std::vector<double>& row_marginal,
                                   const std::vector<double>& col_marginal);
  double Weight(int row, int col) const { return weights[row * cols + col]; }
  std::vector<double> Marginal(int player) const;
  nlohmann::json ToJson() const;
  static JointDistribution FromJson(const nlohmann::json& json);
};

// Throws Error(kShapeMismatch).
std::array<double, 2> ExpectedPayoffs(const PayoffTensor& tensor,
                                      const JointDistribution& joint);

// Largest gain any player gets by committing to a fixed action instead of
// following the joint recommendation; non-positive exactly at a CCE.
double CceGap(const PayoffTensor& tensor, const JointDistribution& joint);

// Both players run regret matching simultaneously; returns the empirical
// distribution of play (average of outer products of current strategies).
JointDistribution RegretMatchingCce(const PayoffTensor& tensor,
                                    int iterations);

struct ReplicatorResult {
  std::array<std::vector<double>, 2> average;  // Time-averaged marginals.
  std::array<std::vector<double>, 2> last;     // Final iterate.
};

// Two-population discrete-time replicator dynamics from the uniform profile:
//   x_a <- x_a * (1 + step_size * (u(a, y) - u(x, y)))
// clamped at zero and renormalized, simultaneously for both populations.
// Throws Error(kDivergence) if a normalizer is not positive.
ReplicatorResult ReplicatorDynamics(const PayoffTensor& tensor, int steps,
                                    double step_size);

struct BargainingResult {
  JointDistribution joint;
  std::array<double, 2> payoffs{};
  std::array<double, 2> disagreement{};
  double nash_product = 0.0;
  // No feasible point strictly dominates the disagreement point; joint is
  // the single cell with the largest minimum gain.
  bool degenerate = false;
};

inline constexpr double kDisagreementOffset = 1e-3;

// Nash bargaining over joint distributions: maximizes
//   sum_i log(U_i(sigma) - d_i)
// by projected gradient ascent on the simplex. The default disagreement
// point is each player's smallest payoff minus kDisagreementOffset.
BargainingResult NashBargaining(
    const PayoffTensor& tensor,
    std::optional<std::array<double, 2>> disagreement = std::nullopt,
    int steps = 10'000, double step_size = 0.05);

enum class MetaSolver { kRegretMatchingCce, kReplicatorDynamics,
                        kNashBargaining };

std::string_view MetaSolverName(MetaSolver solver);
// Accepts "cce", "replicator", "nash_bargaining". Throws kParseError.
MetaSolver ParseMetaSolver(std::string_view name);

struct MetaSolverOptions {
  int cce_iterations = 10'000;
  int replicator_steps = 10'000;
  double replicator_step_size = 0.01;
};

// Replicator dynamics yields the product of its time-averaged marginals.
JointDistribution SolveMetaGame(const PayoffTensor& tensor, MetaSolver solver,
                                const MetaSolverOptions& options = {});

// Euclidean projection onto the probability simplex.
std::vector<double> ProjectToSimplex(const std::vector<double>& point);

}  // namespace dialogue_games

#endif  // DIALOGUE_GAMES_NORMAL_FORM_H_
