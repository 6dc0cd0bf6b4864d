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

#include "dialogue_games/imitation.h"

#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

#include "dialogue_games/cfr.h"
#include "dialogue_games/dialogue_game.h"
#include "dialogue_games/domains.h"
#include "dialogue_games/errors.h"
#include "dialogue_games/util.h"

namespace dialogue_games {
namespace {

constexpr uint64_t kSignSalt = 0x5349474eULL;

Eigen::MatrixXd ReadMatrix(const nlohmann::json& j, int rows, int cols) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows) {
    throw Error(ErrorCode::kShapeMismatch, "checkpoint matrix has wrong rows");
  }
  Eigen::MatrixXd m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols) {
      throw Error(ErrorCode::kShapeMismatch, "checkpoint matrix has wrong cols");
    }
    for (int c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
  }
  return m;
}

Eigen::VectorXd ReadVector(const nlohmann::json& j, int size) {
  if (!j.is_array() || static_cast<int>(j.size()) != size) {
    throw Error(ErrorCode::kShapeMismatch, "checkpoint vector has wrong size");
  }
  Eigen::VectorXd v(size);
  for (int i = 0; i < size; ++i) v(i) = j[i].get<double>();
  return v;
}

nlohmann::json WriteMatrix(const Eigen::MatrixXd& m) {
  nlohmann::json j = nlohmann::json::array();
  for (int r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    j.push_back(row);
  }
  return j;
}

nlohmann::json WriteVector(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

void SoftmaxColumns(Eigen::MatrixXd& z) {
  for (int c = 0; c < z.cols(); ++c) {
    auto col = z.col(c);
    col.array() -= col.maxCoeff();
    col = col.array().exp().matrix();
    col /= col.sum();
  }
}

}  // namespace

std::vector<std::string> Tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

HashingEmbedder::HashingEmbedder(int dimension) : dimension_(dimension) {
  if (dimension < 8) {
    throw Error(ErrorCode::kConfigInvalid, "embedding dimension must be >= 8");
  }
}

int HashingEmbedder::Index(std::string_view token, int dimension) {
  return static_cast<int>(Hash64(token) % static_cast<uint64_t>(dimension));
}

double HashingEmbedder::Sign(std::string_view token) {
  return (Hash64(token, kSignSalt) & 1) ? 1.0 : -1.0;
}

std::vector<double> HashingEmbedder::Raw(std::string_view text) const {
  std::vector<double> v(dimension_, 0.0);
  for (const auto& token : Tokenize(text)) {
    v[Index(token, dimension_)] += Sign(token);
  }
  return v;
}

std::vector<double> HashingEmbedder::Embed(std::string_view text) const {
  std::vector<double> v = Raw(text);
  double norm = 0.0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (norm == 0.0) {
    v[0] = 1.0;
    return v;
  }
  for (double& x : v) x /= norm;
  return v;
}

std::vector<ImitationExample> BuildDataset(
    const std::vector<GameConfig>& games,
    const std::vector<uint64_t>& game_seeds, int cfr_iterations,
    const BackendBundle& backends, const Embedder& embedder) {
  if (games.empty() || games.size() != game_seeds.size()) {
    throw Error(ErrorCode::kConfigInvalid,
                "need one seed per game and at least one game");
  }
  std::vector<ImitationExample> dataset;
  for (size_t g = 0; g < games.size(); ++g) {
    DialogueGame game(games[g], backends);
    const GameTree tree = GameTree::Build(game);
    const TabularPolicy policy = CfrSolve(tree, cfr_iterations);
    for (const auto& s : tree.infostates()) {
      ImitationExample ex;
      ex.embedding = embedder.Embed(s.key);
      ex.target = policy.Probabilities(s.key, s.num_actions);
      ex.game_seed = game_seeds[g];
      ex.infostate_key = s.key;
      dataset.push_back(std::move(ex));
    }
  }
  return dataset;
}

std::vector<ImitationExample> BuildDataset(int num_games, DomainId domain,
                                           int cfr_iterations,
                                           const BackendBundle& backends,
                                           const Embedder& embedder,
                                           uint64_t first_seed) {
  if (num_games < 1) {
    throw Error(ErrorCode::kConfigInvalid, "num_games must be >= 1");
  }
  std::vector<GameConfig> games;
  std::vector<uint64_t> seeds;
  for (int i = 0; i < num_games; ++i) {
    seeds.push_back(first_seed + i);
    games.push_back(GenerateGameConfig(domain, seeds.back()));
  }
  return BuildDataset(games, seeds, cfr_iterations, backends, embedder);
}

std::string DatasetToJsonl(const std::vector<ImitationExample>& dataset) {
  std::string out;
  for (const auto& ex : dataset) {
    nlohmann::json j = {{"embedding", ex.embedding},
                        {"target", ex.target},
                        {"game_seed", ex.game_seed},
                        {"infostate_key", ex.infostate_key}};
    out += j.dump() + "\n";
  }
  return out;
}

std::vector<ImitationExample> DatasetFromJsonl(std::string_view text) {
  std::vector<ImitationExample> dataset;
  for (const auto& line : SplitLines(text)) {
    if (Trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      ImitationExample ex;
      ex.embedding = j.at("embedding").get<std::vector<double>>();
      ex.target = j.at("target").get<std::vector<double>>();
      ex.game_seed = j.value("game_seed", uint64_t{0});
      ex.infostate_key = j.value("infostate_key", std::string());
      dataset.push_back(std::move(ex));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParseError, std::string("dataset line: ") + e.what());
    }
  }
  return dataset;
}

MlpPolicy::MlpPolicy(int input_dim, int num_actions, int hidden)
    : w1(Eigen::MatrixXd::Zero(hidden, input_dim)),
      w2(Eigen::MatrixXd::Zero(hidden, hidden)),
      w3(Eigen::MatrixXd::Zero(num_actions, hidden)),
      b1(Eigen::VectorXd::Zero(hidden)),
      b2(Eigen::VectorXd::Zero(hidden)),
      b3(Eigen::VectorXd::Zero(num_actions)) {
  if (input_dim < 1 || num_actions < 1 || hidden < 1) {
    throw Error(ErrorCode::kShapeMismatch, "MLP dimensions must be positive");
  }
}

MlpPolicy MlpPolicy::Random(int input_dim, int num_actions, uint64_t seed,
                            int hidden) {
  MlpPolicy policy(input_dim, num_actions, hidden);
  Rng rng(seed);
  for (Eigen::MatrixXd* w : {&policy.w1, &policy.w2, &policy.w3}) {
    const double limit = std::sqrt(6.0 / (w->rows() + w->cols()));
    for (Eigen::Index i = 0; i < w->size(); ++i) {
      w->data()[i] = (2.0 * UniformDouble(rng) - 1.0) * limit;
    }
  }
  return policy;
}

int64_t MlpPolicy::NumParameters() const {
  return w1.size() + w2.size() + w3.size() + b1.size() + b2.size() + b3.size();
}

std::vector<double> MlpPolicy::Forward(std::span<const double> embedding) const {
  if (static_cast<int>(embedding.size()) != input_dim()) {
    throw Error(ErrorCode::kShapeMismatch,
                "embedding has dimension " + std::to_string(embedding.size()) +
                    ", policy expects " + std::to_string(input_dim()));
  }
  const Eigen::Map<const Eigen::VectorXd> x(embedding.data(), embedding.size());
  const Eigen::VectorXd h1 = (w1 * x + b1).cwiseMax(0.0);
  const Eigen::VectorXd h2 = (w2 * h1 + b2).cwiseMax(0.0);
  Eigen::MatrixXd z = w3 * h2 + b3;
  SoftmaxColumns(z);
  return std::vector<double>(z.data(), z.data() + z.size());
}

std::vector<double*> MlpPolicy::ParameterPointers() {
  std::vector<double*> out;
  auto add_vec = [&](Eigen::VectorXd& v) {
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v.data() + i);
  };
  auto add_mat = [&](Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) out.push_back(m.data() + i);
  };
  add_mat(w1);
  add_vec(b1);
  add_mat(w2);
  add_vec(b2);
  add_mat(w3);
  add_vec(b3);
  return out;
}

std::vector<const double*> MlpPolicy::GradientPointers(
    const MlpGradients& g) const {
  std::vector<const double*> out;
  auto add = [&](const auto& m) {
    for (Eigen::Index i = 0; i < m.size(); ++i) out.push_back(m.data() + i);
  };
  add(g.w1);
  add(g.b1);
  add(g.w2);
  add(g.b2);
  add(g.w3);
  add(g.b3);
  return out;
}

nlohmann::json MlpPolicy::ToJson() const {
  return {{"input_dim", input_dim()},   {"hidden", hidden()},
          {"num_actions", num_actions()}, {"w1", WriteMatrix(w1)},
          {"b1", WriteVector(b1)},       {"w2", WriteMatrix(w2)},
          {"b2", WriteVector(b2)},       {"w3", WriteMatrix(w3)},
          {"b3", WriteVector(b3)}};
}

MlpPolicy MlpPolicy::FromJson(const nlohmann::json& j) {
  try {
    const int d = j.at("input_dim").get<int>();
    const int h = j.at("hidden").get<int>();
    const int a = j.at("num_actions").get<int>();
    MlpPolicy policy(d, a, h);
    policy.w1 = ReadMatrix(j.at("w1"), h, d);
    policy.b1 = ReadVector(j.at("b1"), h);
    policy.w2 = ReadMatrix(j.at("w2"), h, h);
    policy.b2 = ReadVector(j.at("b2"), h);
    policy.w3 = ReadMatrix(j.at("w3"), a, h);
    policy.b3 = ReadVector(j.at("b3"), a);
    return policy;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, std::string("checkpoint: ") + e.what());
  }
}

LossAndGrad CrossEntropyLossAndGrad(
    const MlpPolicy& policy, std::span<const ImitationExample* const> batch) {
  if (batch.empty()) {
    throw Error(ErrorCode::kConfigInvalid, "empty batch");
  }
  // Repeated draws of one example contribute identical terms; each distinct
  // example is evaluated once with its multiplicity as weight.
  std::map<const ImitationExample*, int> counts;
  for (const ImitationExample* ex : batch) ++counts[ex];
  const int n = static_cast<int>(counts.size());
  const int d = policy.input_dim(), a = policy.num_actions();
  Eigen::MatrixXd x(d, n), t(a, n);
  Eigen::RowVectorXd weight(n);
  int col = 0;
  for (const auto& [ex, count] : counts) {
    if (static_cast<int>(ex->embedding.size()) != d ||
        static_cast<int>(ex->target.size()) != a) {
      throw Error(ErrorCode::kShapeMismatch,
                  "example shape does not match the policy");
    }
    x.col(col) = Eigen::Map<const Eigen::VectorXd>(ex->embedding.data(), d);
    t.col(col) = Eigen::Map<const Eigen::VectorXd>(ex->target.data(), a);
    weight(col) = static_cast<double>(count) / batch.size();
    ++col;
  }

  const Eigen::MatrixXd z1 = (policy.w1 * x).colwise() + policy.b1;
  const Eigen::MatrixXd h1 = z1.cwiseMax(0.0);
  const Eigen::MatrixXd z2 = (policy.w2 * h1).colwise() + policy.b2;
  const Eigen::MatrixXd h2 = z2.cwiseMax(0.0);
  Eigen::MatrixXd p = (policy.w3 * h2).colwise() + policy.b3;
  SoftmaxColumns(p);

  LossAndGrad out;
  Eigen::MatrixXd dz(a, n);
  for (int c = 0; c < n; ++c) {
    double target_mass = 0.0;
    double loss = 0.0;
    for (int k = 0; k < a; ++k) {
      // Clamped terms are constant in the parameters.
      if (p(k, c) >= kLogClamp) {
        target_mass += t(k, c);
      }
      loss -= t(k, c) * std::log(std::max(p(k, c), kLogClamp));
    }
    out.loss += weight(c) * loss;
    for (int k = 0; k < a; ++k) {
      const double own = p(k, c) >= kLogClamp ? t(k, c) : 0.0;
      dz(k, c) = weight(c) * (p(k, c) * target_mass - own);
    }
  }

  auto& g = out.grads;
  g.w3 = dz * h2.transpose();
  g.b3 = dz.rowwise().sum();
  const Eigen::MatrixXd dh2 =
      (policy.w3.transpose() * dz).cwiseProduct((z2.array() > 0.0).cast<double>().matrix());
  g.w2 = dh2 * h1.transpose();
  g.b2 = dh2.rowwise().sum();
  const Eigen::MatrixXd dh1 =
      (policy.w2.transpose() * dh2).cwiseProduct((z1.array() > 0.0).cast<double>().matrix());
  g.w1 = dh1 * x.transpose();
  g.b1 = dh1.rowwise().sum();
  return out;
}

void TrainConfig::Validate() const {
  if (steps < 1 || batch_size < 1 || !(learning_rate > 0.0) ||
      !(adam_beta1 > 0.0 && adam_beta1 < 1.0) ||
      !(adam_beta2 > 0.0 && adam_beta2 < 1.0) || !(adam_eps > 0.0) ||
      log_every < 1) {
    throw Error(ErrorCode::kConfigInvalid, "invalid training configuration");
  }
}

std::string LossCurveCsv(const std::vector<LossPoint>& curve) {
  std::string out = "step,loss\n";
  for (const auto& p : curve) {
    out += std::to_string(p.step) + "," + FormatDouble(p.loss) + "\n";
  }
  return out;
}

TrainResult Train(MlpPolicy policy, const std::vector<ImitationExample>& data,
                  const TrainConfig& config) {
  config.Validate();
  if (data.empty()) throw Error(ErrorCode::kConfigInvalid, "empty dataset");
  Rng rng(config.rng_seed);
  // Adam moments, shaped like the parameters.
  MlpGradients m{Eigen::MatrixXd::Zero(policy.w1.rows(), policy.w1.cols()),
                 Eigen::MatrixXd::Zero(policy.w2.rows(), policy.w2.cols()),
                 Eigen::MatrixXd::Zero(policy.w3.rows(), policy.w3.cols()),
                 Eigen::VectorXd::Zero(policy.b1.size()),
                 Eigen::VectorXd::Zero(policy.b2.size()),
                 Eigen::VectorXd::Zero(policy.b3.size())};
  MlpGradients v = m;
  std::vector<const ImitationExample*> batch(config.batch_size);
  TrainResult result{policy, {}};
  double window = 0.0;
  int window_steps = 0;
  double beta1_power = 1.0, beta2_power = 1.0;
  for (int step = 1; step <= config.steps; ++step) {
    for (auto& ex : batch) {
      ex = &data[UniformInt(rng, 0, static_cast<int64_t>(data.size()) - 1)];
    }
    const LossAndGrad lg = CrossEntropyLossAndGrad(policy, batch);
    if (!std::isfinite(lg.loss)) {
      throw Error(ErrorCode::kNonFiniteLoss,
                  "loss is " + FormatDouble(lg.loss) + " at step " +
                      std::to_string(step) + "; trace so far:\n" +
                      LossCurveCsv(result.loss_curve));
    }
    beta1_power *= config.adam_beta1;
    beta2_power *= config.adam_beta2;
    const double b1 = config.adam_beta1, b2 = config.adam_beta2;
    const double c1 = 1.0 - beta1_power, c2 = 1.0 - beta2_power;
    auto update = [&](auto& param, const auto& grad, auto& m1, auto& m2) {
      m1.array() = b1 * m1.array() + (1.0 - b1) * grad.array();
      m2.array() = b2 * m2.array() + (1.0 - b2) * grad.array().square();
      param.array() -= config.learning_rate * (m1.array() / c1) /
                       ((m2.array() / c2).sqrt() + config.adam_eps);
    };
    update(policy.w1, lg.grads.w1, m.w1, v.w1);
    update(policy.b1, lg.grads.b1, m.b1, v.b1);
    update(policy.w2, lg.grads.w2, m.w2, v.w2);
    update(policy.b2, lg.grads.b2, m.b2, v.b2);
    update(policy.w3, lg.grads.w3, m.w3, v.w3);
    update(policy.b3, lg.grads.b3, m.b3, v.b3);
    window += lg.loss;
    ++window_steps;
    if (step % config.log_every == 0 || step == config.steps) {
      // Mean batch loss over the window ending at this step.
      result.loss_curve.push_back({step, window / window_steps});
      window = 0.0;
      window_steps = 0;
    }
  }
  result.policy = std::move(policy);
  return result;
}

MlpPolicyAdapter::MlpPolicyAdapter(std::shared_ptr<const MlpPolicy> mlp,
                                   std::shared_ptr<const Embedder> embedder)
    : mlp_(std::move(mlp)), embedder_(std::move(embedder)) {}

std::vector<double> MlpPolicyAdapter::Probabilities(std::string_view infostate,
                                                    int num_actions) const {
  if (num_actions != mlp_->num_actions()) {
    throw Error(ErrorCode::kShapeMismatch,
                "policy predicts " + std::to_string(mlp_->num_actions()) +
                    " actions, game has " + std::to_string(num_actions));
  }
  return mlp_->Forward(embedder_->Embed(infostate));
}

ElectionResult ElectFromTensor(const PayoffTensor& tensor, int cce_iterations) {
  ElectionResult result;
  result.tensor = tensor;
  result.joint = RegretMatchingCce(tensor, cce_iterations);
  const auto m0 = result.joint.Marginal(0);
  const auto m1 = result.joint.Marginal(1);
  for (size_t i = 0; i < m0.size(); ++i) {
    result.selection.push_back(0.5 * (m0[i] + m1[i]));
  }
  return result;
}

ElectionResult MetaGameElection(const std::vector<GameConfig>& games,
                                const std::vector<ElectionOption>& options,
                                const BackendBundle& backends,
                                int cce_iterations) {
  if (options.size() < 2) {
    throw Error(ErrorCode::kConfigInvalid, "an election needs two options");
  }
  if (games.empty()) throw Error(ErrorCode::kConfigInvalid, "no games");
  const int k = static_cast<int>(options.size());
  std::vector<std::vector<double>> u0(k, std::vector<double>(k, 0.0));
  std::vector<std::vector<double>> u1 = u0;
  for (const auto& config : games) {
    DialogueGame game(config, backends);
    const GameTree tree = GameTree::Build(game);
    for (int a = 0; a < k; ++a) {
      for (int b = 0; b < k; ++b) {
        const auto r = ExpectedReturns(
            tree, {options[a].policy.get(), options[b].policy.get()});
        u0[a][b] += r[0] / games.size();
        u1[a][b] += r[1] / games.size();
      }
    }
  }
  std::vector<std::string> names;
  for (const auto& o : options) names.push_back(o.name);
  return ElectFromTensor(PayoffTensor::FromMatrices(u0, u1, names, names),
                         cce_iterations);
}

}  // namespace dialogue_games
