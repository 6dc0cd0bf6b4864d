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

#include "dialogue_games/normal_form.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "dialogue_games/errors.h"
#include "dialogue_games/util.h"

namespace dialogue_games {
namespace {

std::vector<std::string> IndexLabels(int n) {
  std::vector<std::string> labels;
  for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  return labels;
}

std::vector<double> RegretMatch(const std::vector<double>& regret) {
  std::vector<double> probs(regret.size(), 0.0);
  double total = 0.0;
  for (size_t a = 0; a < regret.size(); ++a) {
    probs[a] = std::max(regret[a], 0.0);
    total += probs[a];
  }
  if (total <= 0.0) {
    std::fill(probs.begin(), probs.end(), 1.0 / regret.size());
  } else {
    for (double& p : probs) p /= total;
  }
  return probs;
}

// Expected payoff of each row (player 0) or column (player 1) against the
// opponent mixture.
std::vector<double> ActionValues(const PayoffTensor& t, int player,
                                 const std::vector<double>& opponent) {
  std::vector<double> out(t.NumActions(player), 0.0);
  for (int r = 0; r < t.rows; ++r) {
    for (int c = 0; c < t.cols; ++c) {
      if (player == 0) {
        out[r] += opponent[c] * t.Payoff(0, r, c);
      } else {
        out[c] += opponent[r] * t.Payoff(1, r, c);
      }
    }
  }
  return out;
}

double Dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

PayoffTensor PayoffTensor::FromMatrices(
    const std::vector<std::vector<double>>& row_payoffs,
    const std::vector<std::vector<double>>& col_payoffs,
    std::vector<std::string> row_labels, std::vector<std::string> col_labels) {
  PayoffTensor t;
  t.rows = static_cast<int>(row_payoffs.size());
  t.cols = t.rows ? static_cast<int>(row_payoffs[0].size()) : 0;
  if (static_cast<int>(col_payoffs.size()) != t.rows) {
    throw Error(ErrorCode::kShapeMismatch, "payoff matrices differ in rows");
  }
  for (int r = 0; r < t.rows; ++r) {
    if (static_cast<int>(row_payoffs[r].size()) != t.cols ||
        static_cast<int>(col_payoffs[r].size()) != t.cols) {
      throw Error(ErrorCode::kShapeMismatch, "ragged payoff matrix");
    }
    for (int c = 0; c < t.cols; ++c) {
      t.values.push_back({row_payoffs[r][c], col_payoffs[r][c]});
    }
  }
  t.row_labels = row_labels.empty() ? IndexLabels(t.rows) : std::move(row_labels);
  t.col_labels = col_labels.empty() ? IndexLabels(t.cols) : std::move(col_labels);
  t.Validate();
  return t;
}

void PayoffTensor::Validate() const {
  if (rows <= 0 || cols <= 0) {
    throw Error(ErrorCode::kShapeMismatch, "payoff tensor is empty");
  }
  if (static_cast<int>(values.size()) != rows * cols ||
      static_cast<int>(row_labels.size()) != rows ||
      static_cast<int>(col_labels.size()) != cols) {
    throw Error(ErrorCode::kShapeMismatch, "payoff tensor shape mismatch");
  }
  for (const auto& v : values) {
    if (!std::isfinite(v[0]) || !std::isfinite(v[1])) {
      throw Error(ErrorCode::kConfigInvalid, "payoff tensor has a non-finite entry");
    }
  }
}

std::string PayoffTensor::ToCsv() const {
  std::string out = "row_label,col_label,u1,u2\n";
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      out += CsvEscape(row_labels[r]) + "," + CsvEscape(col_labels[c]) + "," +
             FormatDouble(Payoff(0, r, c)) + "," +
             FormatDouble(Payoff(1, r, c)) + "\n";
    }
  }
  return out;
}

PayoffTensor PayoffTensor::FromCsv(std::string_view csv) {
  const auto rows_in = ParseCsv(csv);
  if (rows_in.empty() || rows_in[0] != std::vector<std::string>{
                                           "row_label", "col_label", "u1", "u2"}) {
    throw Error(ErrorCode::kParseError, "payoff CSV needs the standard header");
  }
  PayoffTensor t;
  std::map<std::pair<std::string, std::string>, std::array<double, 2>> cells;
  for (size_t i = 1; i < rows_in.size(); ++i) {
    const auto& row = rows_in[i];
    if (row.size() != 4) {
      throw Error(ErrorCode::kParseError, "payoff CSV row needs 4 fields");
    }
    if (std::find(t.row_labels.begin(), t.row_labels.end(), row[0]) ==
        t.row_labels.end()) {
      t.row_labels.push_back(row[0]);
    }
    if (std::find(t.col_labels.begin(), t.col_labels.end(), row[1]) ==
        t.col_labels.end()) {
      t.col_labels.push_back(row[1]);
    }
    cells[{row[0], row[1]}] = {ParseDouble(row[2]), ParseDouble(row[3])};
  }
  t.rows = static_cast<int>(t.row_labels.size());
  t.cols = static_cast<int>(t.col_labels.size());
  for (const auto& r : t.row_labels) {
    for (const auto& c : t.col_labels) {
      auto it = cells.find({r, c});
      if (it == cells.end()) {
        throw Error(ErrorCode::kShapeMismatch,
                    "payoff CSV is missing cell (" + r + ", " + c + ")");
      }
      t.values.push_back(it->second);
    }
  }
  t.Validate();
  return t;
}

JointDistribution JointDistribution::Uniform(int rows, int cols) {
  return {rows, cols, std::vector<double>(rows * cols, 1.0 / (rows * cols))};
}

JointDistribution JointDistribution::Product(
    const std::vector<double>& row_marginal,
    const std::vector<double>& col_marginal) {
  JointDistribution j;
  j.rows = static_cast<int>(row_marginal.size());
  j.cols = static_cast<int>(col_marginal.size());
  for (double x : row_marginal) {
    for (double y : col_marginal) j.weights.push_back(x * y);
  }
  return j;
}

std::vector<double> JointDistribution::Marginal(int player) const {
  std::vector<double> m(player == 0 ? rows : cols, 0.0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) m[player == 0 ? r : c] += Weight(r, c);
  }
  return m;
}

nlohmann::json JointDistribution::ToJson() const {
  return {{"rows", rows}, {"cols", cols}, {"weights", weights}};
}

JointDistribution JointDistribution::FromJson(const nlohmann::json& json) {
  try {
    JointDistribution j{json.at("rows").get<int>(), json.at("cols").get<int>(),
                        json.at("weights").get<std::vector<double>>()};
    if (static_cast<int>(j.weights.size()) != j.rows * j.cols) {
      throw Error(ErrorCode::kShapeMismatch, "joint distribution shape");
    }
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError,
                std::string("joint distribution: ") + e.what());
  }
}

std::array<double, 2> ExpectedPayoffs(const PayoffTensor& tensor,
                                      const JointDistribution& joint) {
  if (joint.rows != tensor.rows || joint.cols != tensor.cols) {
    throw Error(ErrorCode::kShapeMismatch, "joint does not match tensor");
  }
  std::array<double, 2> u = {0.0, 0.0};
  for (int r = 0; r < tensor.rows; ++r) {
    for (int c = 0; c < tensor.cols; ++c) {
      const double w = joint.Weight(r, c);
      u[0] += w * tensor.Payoff(0, r, c);
      u[1] += w * tensor.Payoff(1, r, c);
    }
  }
  return u;
}

double CceGap(const PayoffTensor& tensor, const JointDistribution& joint) {
  const auto u = ExpectedPayoffs(tensor, joint);
  const auto rows = ActionValues(tensor, 0, joint.Marginal(1));
  const auto cols = ActionValues(tensor, 1, joint.Marginal(0));
  double gap = -std::numeric_limits<double>::infinity();
  for (double v : rows) gap = std::max(gap, v - u[0]);
  for (double v : cols) gap = std::max(gap, v - u[1]);
  return gap;
}

JointDistribution RegretMatchingCce(const PayoffTensor& tensor,
                                    int iterations) {
  tensor.Validate();
  if (iterations < 1) {
    throw Error(ErrorCode::kConfigInvalid, "need at least one iteration");
  }
  std::vector<double> regret_row(tensor.rows, 0.0);
  std::vector<double> regret_col(tensor.cols, 0.0);
  JointDistribution avg{tensor.rows, tensor.cols,
                        std::vector<double>(tensor.rows * tensor.cols, 0.0)};
  for (int t = 0; t < iterations; ++t) {
    const auto x = RegretMatch(regret_row);
    const auto y = RegretMatch(regret_col);
    for (int r = 0; r < tensor.rows; ++r) {
      for (int c = 0; c < tensor.cols; ++c) {
        avg.weights[r * tensor.cols + c] += x[r] * y[c];
      }
    }
    const auto ux = ActionValues(tensor, 0, y);
    const auto uy = ActionValues(tensor, 1, x);
    const double vx = Dot(x, ux), vy = Dot(y, uy);
    for (int r = 0; r < tensor.rows; ++r) regret_row[r] += ux[r] - vx;
    for (int c = 0; c < tensor.cols; ++c) regret_col[c] += uy[c] - vy;
  }
  for (double& w : avg.weights) w /= iterations;
  return avg;
}

ReplicatorResult ReplicatorDynamics(const PayoffTensor& tensor, int steps,
                                    double step_size) {
  tensor.Validate();
  if (steps < 1 || !(step_size > 0.0)) {
    throw Error(ErrorCode::kConfigInvalid, "replicator needs steps, step size > 0");
  }
  std::array<std::vector<double>, 2> x = {
      std::vector<double>(tensor.rows, 1.0 / tensor.rows),
      std::vector<double>(tensor.cols, 1.0 / tensor.cols)};
  ReplicatorResult result;
  result.average = {std::vector<double>(tensor.rows, 0.0),
                    std::vector<double>(tensor.cols, 0.0)};
  for (int t = 0; t < steps; ++t) {
    std::array<std::vector<double>, 2> u = {ActionValues(tensor, 0, x[1]),
                                            ActionValues(tensor, 1, x[0])};
    for (int p = 0; p < 2; ++p) {
      const double mean = Dot(x[p], u[p]);
      double norm = 0.0;
      for (size_t a = 0; a < x[p].size(); ++a) {
        x[p][a] = std::max(0.0, x[p][a] * (1.0 + step_size * (u[p][a] - mean)));
        norm += x[p][a];
      }
      if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw Error(ErrorCode::kDivergence,
                    "replicator normalizer vanished at step " +
                        std::to_string(t));
      }
      for (double& v : x[p]) v /= norm;
      for (size_t a = 0; a < x[p].size(); ++a) result.average[p][a] += x[p][a];
    }
  }
  for (auto& avg : result.average) {
    for (double& v : avg) v /= steps;
  }
  result.last = x;
  return result;
}

std::vector<double> ProjectToSimplex(const std::vector<double>& point) {
  std::vector<double> sorted = point;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0, theta = 0.0;
  for (size_t i = 0; i < sorted.size(); ++i) {
    cumulative += sorted[i];
    const double candidate = (cumulative - 1.0) / (i + 1);
    if (sorted[i] - candidate > 0.0) theta = candidate;
  }
  std::vector<double> out(point.size());
  for (size_t i = 0; i < point.size(); ++i) out[i] = std::max(point[i] - theta, 0.0);
  return out;
}

BargainingResult NashBargaining(const PayoffTensor& tensor,
                                std::optional<std::array<double, 2>> disagreement,
                                int steps, double step_size) {
  tensor.Validate();
  const int n = tensor.rows * tensor.cols;
  std::array<double, 2> d;
  if (disagreement) {
    d = *disagreement;
  } else {
    for (int p = 0; p < 2; ++p) {
      double lo = std::numeric_limits<double>::infinity();
      for (const auto& v : tensor.values) lo = std::min(lo, v[p]);
      d[p] = lo - kDisagreementOffset;
    }
  }
  auto gains = [&](const std::vector<double>& w) {
    std::array<double, 2> g = {-d[0], -d[1]};
    for (int i = 0; i < n; ++i) {
      g[0] += w[i] * tensor.values[i][0];
      g[1] += w[i] * tensor.values[i][1];
    }
    return g;
  };
  auto objective = [&](const std::vector<double>& w) {
    const auto g = gains(w);
    if (g[0] <= 0.0 || g[1] <= 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(g[0]) + std::log(g[1]);
  };

  // Max-min gain over the feasible set; for two players it is attained on a
  // cell or on a segment between two cells.
  std::vector<double> start(n, 0.0);
  double best_min = -std::numeric_limits<double>::infinity();
  int best_cell = 0;
  for (int i = 0; i < n; ++i) {
    const double m = std::min(tensor.values[i][0] - d[0], tensor.values[i][1] - d[1]);
    if (m > best_min) {
      best_min = m;
      best_cell = i;
      std::fill(start.begin(), start.end(), 0.0);
      start[i] = 1.0;
    }
  }
  const int single_cell = best_cell;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      // f_p(t) = (1 - t) a_p + t b_p; the two gains cross at most once.
      const double a0 = tensor.values[i][0] - d[0], a1 = tensor.values[i][1] - d[1];
      const double b0 = tensor.values[j][0] - d[0], b1 = tensor.values[j][1] - d[1];
      const double denom = (b0 - a0) - (b1 - a1);
      if (denom == 0.0) continue;
      const double t = (a1 - a0) / denom;
      if (t <= 0.0 || t >= 1.0) continue;
      const double m = (1 - t) * a0 + t * b0;
      if (m > best_min) {
        best_min = m;
        std::fill(start.begin(), start.end(), 0.0);
        start[i] = 1.0 - t;
        start[j] = t;
      }
    }
  }

  BargainingResult result;
  result.disagreement = d;
  if (!(best_min > 0.0)) {
    result.degenerate = true;
    result.joint = {tensor.rows, tensor.cols, std::vector<double>(n, 0.0)};
    result.joint.weights[single_cell] = 1.0;
    const auto g = gains(result.joint.weights);
    result.payoffs = {g[0] + d[0], g[1] + d[1]};
    result.nash_product = g[0] * g[1];
    return result;
  }

  std::vector<double> w(n, 1.0 / n);
  if (objective(w) < objective(start)) w = start;
  double value = objective(w);
  for (int s = 0; s < steps; ++s) {
    const auto g = gains(w);
    std::vector<double> grad(n);
    for (int i = 0; i < n; ++i) {
      grad[i] = tensor.values[i][0] / g[0] + tensor.values[i][1] / g[1];
    }
    // Backtracking keeps every iterate strictly inside the feasible region
    // and the objective monotone.
    double eta = step_size;
    bool moved = false;
    while (eta > 1e-14) {
      std::vector<double> trial(n);
      for (int i = 0; i < n; ++i) trial[i] = w[i] + eta * grad[i];
      trial = ProjectToSimplex(trial);
      const double v = objective(trial);
      if (v > value) {
        w = std::move(trial);
        value = v;
        moved = true;
        break;
      }
      eta *= 0.5;
    }
    if (!moved) break;
  }
  result.joint = {tensor.rows, tensor.cols, w};
  const auto g = gains(w);
  result.payoffs = {g[0] + d[0], g[1] + d[1]};
  result.nash_product = g[0] * g[1];
  return result;
}

std::string_view MetaSolverName(MetaSolver solver) {
  switch (solver) {
    case MetaSolver::kRegretMatchingCce:
      return "cce";
    case MetaSolver::kReplicatorDynamics:
      return "replicator";
    case MetaSolver::kNashBargaining:
      return "nash_bargaining";
  }
  return "cce";
}

MetaSolver ParseMetaSolver(std::string_view name) {
  const std::string n = NormalizeLabel(name);
  if (n == "cce") return MetaSolver::kRegretMatchingCce;
  if (n == "replicator") return MetaSolver::kReplicatorDynamics;
  if (n == "nash_bargaining") return MetaSolver::kNashBargaining;
  throw Error(ErrorCode::kParseError, "unknown meta-solver '" + n + "'");
}

JointDistribution SolveMetaGame(const PayoffTensor& tensor, MetaSolver solver,
                                const MetaSolverOptions& options) {
  switch (solver) {
    case MetaSolver::kRegretMatchingCce:
      return RegretMatchingCce(tensor, options.cce_iterations);
    case MetaSolver::kReplicatorDynamics: {
      const auto r = ReplicatorDynamics(tensor, options.replicator_steps,
                                        options.replicator_step_size);
      return JointDistribution::Product(r.average[0], r.average[1]);
    }
    case MetaSolver::kNashBargaining:
      return NashBargaining(tensor).joint;
  }
  throw Error(ErrorCode::kConfigInvalid, "unknown meta-solver");
}

}  // namespace dialogue_games
