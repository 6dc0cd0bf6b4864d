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

#include "dialogue_games/psro.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <set>

#include "dialogue_games/assets.h"
#include "dialogue_games/dialogue_game.h"
#include "dialogue_games/domains.h"
#include "dialogue_games/errors.h"
#include "dialogue_games/util.h"

namespace dialogue_games {
namespace {

constexpr double kUnscored = -std::numeric_limits<double>::infinity();

double ScoreOf(const Candidate& c) { return c.score.value_or(kUnscored); }

std::vector<Candidate> Ascending(std::vector<Candidate> candidates) {
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return ScoreOf(a) < ScoreOf(b);
                   });
  return candidates;
}

bool ContainsLabel(const std::vector<Candidate>& candidates,
                   std::string_view label) {
  const std::string n = NormalizeLabel(label);
  return std::any_of(candidates.begin(), candidates.end(),
                     [&](const Candidate& c) {
                       return NormalizeLabel(c.label) == n;
                     });
}

// Collects up to wanted labels that are new with respect to existing
// and to each other, giving up after kProposalAttemptsPerCandidate * wanted
// proposals (an empty reply counts as one).
std::vector<std::string> CollectNovel(Proposer& proposer,
                                      ProposalRequest request,
                                      const std::vector<Candidate>& existing,
                                      int wanted) {
  std::vector<std::string> novel;
  std::vector<Candidate> seen = existing;
  const int max_attempts = kProposalAttemptsPerCandidate * wanted;
  int attempts = 0;
  while (static_cast<int>(novel.size()) < wanted && attempts < max_attempts) {
    request.count = wanted - static_cast<int>(novel.size());
    const auto items = proposer.Propose(request);
    if (items.empty()) {
      ++attempts;
      continue;
    }
    for (const auto& raw : items) {
      if (attempts >= max_attempts ||
          static_cast<int>(novel.size()) >= wanted) {
        break;
      }
      ++attempts;
      const std::string label = Trim(raw);
      if (label.empty() || ContainsLabel(seen, label)) continue;
      novel.push_back(label);
      seen.push_back({label, std::nullopt});
    }
  }
  return novel;
}

Candidate BestOf(const std::vector<Candidate>& candidates) {
  Candidate best = candidates.front();
  for (const auto& c : candidates) {
    if (ScoreOf(c) > ScoreOf(best)) best = c;
  }
  return best;
}

}  // namespace

CandidateSet CandidateSet::Initial(const std::vector<std::string>& labels) {
  CandidateSet set;
  for (int p = 0; p < 2; ++p) {
    for (const auto& l : labels) {
      if (!set.Add(p, l)) {
        throw Error(ErrorCode::kConfigInvalid,
                    "duplicate initial candidate '" + l + "'");
      }
    }
  }
  return set;
}

bool CandidateSet::Contains(int player, std::string_view label) const {
  return ContainsLabel(players.at(player), label);
}

bool CandidateSet::Add(int player, const std::string& label) {
  const std::string trimmed = Trim(label);
  if (trimmed.empty() || Contains(player, trimmed)) return false;
  players.at(player).push_back({trimmed, std::nullopt});
  return true;
}

std::vector<std::string> CandidateSet::Labels(int player) const {
  std::vector<std::string> out;
  for (const auto& c : players.at(player)) out.push_back(c.label);
  return out;
}

GameConfig GameFamily::Config(int index,
                              const std::vector<std::string>& labels) const {
  std::vector<std::string> menu = labels;
  if (std::none_of(menu.begin(), menu.end(), [](const std::string& l) {
        return NormalizeLabel(l) == kAnyLabel;
      })) {
    menu.emplace_back(kAnyLabel);
  }
  GameConfig config = MakeDomainConfig(
      domain, GenerateScenario(domain, scenario_seeds.at(index)), menu);
  config.num_llm_seeds = num_llm_seeds;
  config.num_max_replies = num_max_replies;
  config.Validate();
  return config;
}

PayoffTensor EstimatePayoffTensor(
    const std::array<std::vector<std::string>, 2>& labels,
    const GameFamily& family, const BackendBundle& backends,
    int rollouts_per_cell) {
  if (labels[0].empty() || labels[1].empty()) {
    throw Error(ErrorCode::kConfigInvalid, "candidate labels are empty");
  }
  if (rollouts_per_cell < 1) {
    throw Error(ErrorCode::kConfigInvalid, "rollouts_per_cell must be >= 1");
  }
  if (family.scenario_seeds.empty()) {
    throw Error(ErrorCode::kConfigInvalid, "game family has no scenarios");
  }
  // One menu for both players so every label pair is playable in one game.
  std::vector<std::string> menu;
  for (const auto& side : labels) {
    for (const auto& l : side) {
      if (std::none_of(menu.begin(), menu.end(), [&](const std::string& m) {
            return NormalizeLabel(m) == NormalizeLabel(l);
          })) {
        menu.push_back(l);
      }
    }
  }
  auto index_of = [&](const std::string& l) {
    for (size_t i = 0; i < menu.size(); ++i) {
      if (NormalizeLabel(menu[i]) == NormalizeLabel(l)) return static_cast<int>(i);
    }
    return -1;
  };
  const int num_scenarios = static_cast<int>(family.scenario_seeds.size());
  std::vector<std::unique_ptr<DialogueGame>> games;
  for (int s = 0; s < num_scenarios; ++s) {
    games.push_back(
        std::make_unique<DialogueGame>(family.Config(s, menu), backends));
  }

  PayoffTensor tensor;
  tensor.rows = static_cast<int>(labels[0].size());
  tensor.cols = static_cast<int>(labels[1].size());
  tensor.row_labels = labels[0];
  tensor.col_labels = labels[1];
  for (int r = 0; r < tensor.rows; ++r) {
    for (int c = 0; c < tensor.cols; ++c) {
      const std::array<int, 2> forced = {index_of(labels[0][r]),
                                         index_of(labels[1][c])};
      std::array<std::vector<double>, 2> samples;
      for (int k = 0; k < rollouts_per_cell; ++k) {
        const DialogueGame& game = *games[k % num_scenarios];
        uint64_t tuple = static_cast<uint64_t>(k / num_scenarios);
        DialogueState state = game.NewInitialState();
        while (true) {
          const NodeKind kind = game.Kind(state);
          if (kind.type == NodeKind::kTerminal) break;
          if (kind.type == NodeKind::kDecision) {
            state = game.ApplyAction(state, forced[kind.player]);
          } else {
            const int seeds = game.config().num_llm_seeds;
            state = game.ApplyAction(state, static_cast<int>(tuple % seeds));
            tuple /= seeds;
          }
        }
        const auto returns = game.Returns(state);
        samples[0].push_back(returns[0]);
        samples[1].push_back(returns[1]);
      }
      tensor.values.push_back(
          {StableSum(samples[0]) / rollouts_per_cell,
           StableSum(samples[1]) / rollouts_per_cell});
    }
  }
  tensor.Validate();
  return tensor;
}

ScriptedProposer::ScriptedProposer(std::vector<std::string> script)
    : script_(std::move(script)) {}

void ScriptedProposer::SetCategoryScript(const std::string& category,
                                         std::vector<std::string> labels) {
  category_scripts_[category] = std::move(labels);
}

std::vector<std::string> ScriptedProposer::Propose(
    const ProposalRequest& request) {
  requests_.push_back(request);
  const std::vector<std::string>* source = &script_;
  size_t* cursor = &cursor_[request.player];
  if (!request.category.empty()) {
    auto it = category_scripts_.find(request.category);
    if (it == category_scripts_.end()) return {};
    source = &it->second;
    cursor = &category_cursor_[std::to_string(request.player) + ":" +
                               request.category];
  }
  std::vector<std::string> out;
  while (static_cast<int>(out.size()) < request.count &&
         *cursor < source->size()) {
    out.push_back((*source)[(*cursor)++]);
  }
  return out;
}

LlmProposer::LlmProposer(std::shared_ptr<TextGenerator> generator,
                         std::string kind, uint64_t seed)
    : generator_(std::move(generator)), kind_(std::move(kind)), seed_(seed) {}

std::string LlmProposer::BuildPrompt(const ProposalRequest& request,
                                     std::string_view kind) {
  std::string what(kind);
  if (request.propose_categories) {
    what = "categories of " + what;
  } else if (!request.category.empty()) {
    what += " in the category \"" + request.category + "\"";
  }
  std::string ranked;
  for (const auto& c : request.ranked) ranked += "- " + c.label + "\n";
  std::string prompt(Asset("proposer_list.txt"));
  prompt = ReplaceAll(prompt, "{kind}", what);
  prompt = ReplaceAll(prompt, "{count}", std::to_string(request.count));
  prompt = ReplaceAll(prompt, "{ranked}", ranked);
  return StripTrailingNewlines(prompt);
}

std::vector<std::string> LlmProposer::ParseList(std::string_view text) {
  std::vector<std::string> items;
  for (const auto& raw : SplitLines(text)) {
    std::string line = Trim(raw);
    // Bullets and "1." / "1)" numbering.
    size_t i = 0;
    while (i < line.size() &&
           (line[i] == '-' || line[i] == '*' || std::isdigit(
                static_cast<unsigned char>(line[i])))) {
      ++i;
    }
    if (i < line.size() && (line[i] == '.' || line[i] == ')') && i > 0) ++i;
    if (i > 0 && (i == line.size() || line[i] == ' ')) line = Trim(line.substr(i));
    if (line.size() >= 2 && line.front() == '"' && line.back() == '"') {
      line = line.substr(1, line.size() - 2);
    }
    if (!line.empty()) items.push_back(line);
  }
  return items;
}

std::vector<std::string> LlmProposer::Propose(const ProposalRequest& request) {
  GenerationRequest g;
  g.prompt = BuildPrompt(request, kind_);
  g.seed = static_cast<int>((seed_ + calls_++) & 0x7fffffff);
  auto items = ParseList(generator_->Generate(g));
  if (static_cast<int>(items.size()) > request.count) items.resize(request.count);
  return items;
}

BrResult BrShotgun(int player, const std::vector<Candidate>& current, int k,
                   Proposer& proposer, const Evaluator& evaluator) {
  if (k < 1) throw Error(ErrorCode::kConfigInvalid, "k must be >= 1");
  ProposalRequest request;
  request.player = player;
  request.ranked = Ascending(current);
  const auto labels = CollectNovel(proposer, request, current, k);
  if (labels.empty()) {
    throw Error(ErrorCode::kProposerExhausted,
                "no novel label after " +
                    std::to_string(kProposalAttemptsPerCandidate * k) +
                    " proposals");
  }
  std::vector<Candidate> scored;
  for (const auto& l : labels) scored.push_back({l, evaluator(l)});
  return {BestOf(scored), true, true};
}

BrResult BrBetter(int player, const std::vector<Candidate>& current,
                  double current_score, Proposer& proposer,
                  const Evaluator& evaluator, int max_attempts) {
  ProposalRequest request;
  request.player = player;
  request.ranked = Ascending(current);
  request.count = 1;
  std::vector<Candidate> seen = current;
  std::optional<Candidate> best;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const auto items = proposer.Propose(request);
    if (items.empty()) continue;
    const std::string label = Trim(items.front());
    if (label.empty() || ContainsLabel(seen, label)) continue;
    const double score = evaluator(label);
    Candidate c{label, score};
    seen.push_back(c);
    if (score > current_score) return {c, true, true};
    if (!best || score > ScoreOf(*best)) best = c;
  }
  if (best) return {*best, false, true};
  return {Candidate{}, false, false};
}

BrResult BrTrajectory(int player, const std::vector<Candidate>& scored, int k,
                      Proposer& proposer, const Evaluator& evaluator) {
  if (scored.empty()) {
    throw Error(ErrorCode::kConfigInvalid, "trajectory needs scored candidates");
  }
  return BrShotgun(player, scored, k, proposer, evaluator);
}

CategoricalResult BrCategorical(int player,
                                const std::vector<Category>& categories,
                                const std::vector<Candidate>& existing, int k,
                                int k_prime, Proposer& proposer,
                                const Evaluator& evaluator) {
  if (k < 1 || k_prime < 1) {
    throw Error(ErrorCode::kConfigInvalid, "k and k_prime must be >= 1");
  }
  ProposalRequest request;
  request.player = player;
  request.propose_categories = true;
  std::vector<Candidate> category_ranks;
  for (const auto& c : categories) category_ranks.push_back({c.name, c.score});
  request.ranked = Ascending(category_ranks);
  const auto names = CollectNovel(proposer, request, category_ranks, k_prime);

  std::vector<Candidate> taken = existing;
  std::optional<CategoricalResult> best;
  for (const auto& name : names) {
    ProposalRequest label_request;
    label_request.player = player;
    label_request.category = name;
    label_request.ranked = Ascending(existing);
    const auto labels = CollectNovel(proposer, label_request, taken, k);
    if (labels.empty()) continue;
    Category category{name, 0.0, {}};
    std::vector<double> scores;
    for (const auto& l : labels) {
      const double s = evaluator(l);
      category.labels.push_back({l, s});
      taken.push_back({l, s});
      scores.push_back(s);
    }
    category.score = StableSum(scores) / scores.size();
    if (!best || category.score > best->category.score) {
      best = CategoricalResult{category, BestOf(category.labels)};
    }
  }
  if (!best) {
    throw Error(ErrorCode::kProposerExhausted,
                "no new category produced a novel label");
  }
  return *best;
}

std::string_view BrOperatorName(BrOperator op) {
  switch (op) {
    case BrOperator::kShotgun:
      return "shotgun";
    case BrOperator::kBetter:
      return "better";
    case BrOperator::kTrajectory:
      return "trajectory";
    case BrOperator::kCategorical:
      return "categorical";
  }
  return "shotgun";
}

BrOperator ParseBrOperator(std::string_view name) {
  const std::string n = NormalizeLabel(name);
  if (n == "shotgun") return BrOperator::kShotgun;
  if (n == "better") return BrOperator::kBetter;
  if (n == "trajectory") return BrOperator::kTrajectory;
  if (n == "categorical") return BrOperator::kCategorical;
  throw Error(ErrorCode::kParseError, "unknown best-response operator '" + n + "'");
}

void PsroConfig::Validate() const {
  if (k < 1 || k_prime < 1) {
    throw Error(ErrorCode::kConfigInvalid, "k and k_prime must be >= 1");
  }
  if (max_outer_iterations < 0) {
    throw Error(ErrorCode::kConfigInvalid, "max_outer_iterations must be >= 0");
  }
  if (rollouts_per_cell < 1) {
    throw Error(ErrorCode::kConfigInvalid, "rollouts_per_cell must be >= 1");
  }
  if (better_max_attempts < 1) {
    throw Error(ErrorCode::kConfigInvalid, "better_max_attempts must be >= 1");
  }
}

OperatorResponseOracle::OperatorResponseOracle(const PsroConfig& config,
                                               Proposer& proposer)
    : config_(config), proposer_(proposer) {}

std::string OperatorResponseOracle::Respond(int player,
                                            const PsroContext& context) {
  const auto& current = context.candidates->players.at(player);
  try {
    switch (config_.br_operator) {
      case BrOperator::kShotgun:
        return BrShotgun(player, current, config_.k, proposer_,
                         context.evaluator).candidate.label;
      case BrOperator::kTrajectory:
        return BrTrajectory(player, current, config_.k, proposer_,
                            context.evaluator).candidate.label;
      case BrOperator::kBetter: {
        // The bar is the value of the current meta-strategy.
        const auto mass = context.meta_strategy->Marginal(player);
        double value = 0.0;
        for (size_t i = 0; i < current.size(); ++i) {
          value += mass[i] * ScoreOf(current[i]);
        }
        const BrResult r = BrBetter(player, current, value, proposer_,
                                    context.evaluator,
                                    config_.better_max_attempts);
        if (r.novel) return r.candidate.label;
        break;
      }
      case BrOperator::kCategorical: {
        auto& categories = categories_[player];
        if (categories.empty()) {
          Category initial{"initial", 0.0, current};
          double total = 0.0;
          for (const auto& c : current) total += ScoreOf(c);
          initial.score = total / current.size();
          categories.push_back(initial);
        }
        const auto r = BrCategorical(player, categories, current, config_.k,
                                     config_.k_prime, proposer_,
                                     context.evaluator);
        categories.push_back(r.category);
        return r.best_label.label;
      }
    }
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kProposerExhausted) throw;
  }
  // Nothing new: answer with the best existing candidate, which stops the
  // loop for this player.
  return BestOf(current).label;
}

nlohmann::json PsroTrace::ToJson() const {
  nlohmann::json iterations_json = nlohmann::json::array();
  for (const auto& it : iterations) {
    nlohmann::json labels = nlohmann::json::array();
    nlohmann::json scores = nlohmann::json::array();
    for (int p = 0; p < 2; ++p) {
      labels.push_back(it.candidates.Labels(p));
      nlohmann::json s = nlohmann::json::array();
      for (const auto& c : it.candidates.players[p]) {
        s.push_back(c.score ? nlohmann::json(*c.score) : nlohmann::json());
      }
      scores.push_back(s);
    }
    nlohmann::json entry = {
        {"iteration", it.iteration},
        {"labels", labels},
        {"scores", scores},
        {"tensor", it.tensor.ToCsv()},
        {"meta_strategy", it.meta_strategy.ToJson()},
        {"marginals", {it.meta_strategy.Marginal(0), it.meta_strategy.Marginal(1)}},
        {"new_candidates", it.new_candidates},
    };
    if (!it.responses[0].empty() || !it.responses[1].empty()) {
      entry["responses"] = it.responses;
    }
    iterations_json.push_back(entry);
  }
  return {{"converged", converged}, {"iterations", iterations_json}};
}

std::string PsroTrace::MarginalsCsv() const {
  std::string out = "iteration,player,label,mass\n";
  for (const auto& it : iterations) {
    for (int p = 0; p < 2; ++p) {
      const auto mass = it.meta_strategy.Marginal(p);
      const auto& candidates = it.candidates.players[p];
      for (size_t i = 0; i < candidates.size(); ++i) {
        out += std::to_string(it.iteration) + "," + std::to_string(p) + "," +
               CsvEscape(candidates[i].label) + "," + FormatDouble(mass[i]) +
               "\n";
      }
    }
  }
  return out;
}

PsroTrace RunPsro(const PsroConfig& config, const CandidateSet& initial,
                  const TensorEstimator& estimator, ResponseOracle& oracle) {
  config.Validate();
  if (config.append_mode == AppendMode::kSharedFirstNovel &&
      initial.Labels(0) != initial.Labels(1)) {
    throw Error(ErrorCode::kConfigInvalid,
                "shared append mode needs identical initial sets");
  }
  PsroTrace trace;
  CandidateSet candidates = initial;
  for (int iteration = 0;; ++iteration) {
    PsroIteration record;
    record.iteration = iteration;
    record.tensor = estimator({candidates.Labels(0), candidates.Labels(1)});
    record.meta_strategy =
        SolveMetaGame(record.tensor, config.meta_solver, config.meta_options);
    const std::array<std::vector<double>, 2> mass = {
        record.meta_strategy.Marginal(0), record.meta_strategy.Marginal(1)};
    for (int p = 0; p < 2; ++p) {
      auto& list = candidates.players[p];
      for (size_t i = 0; i < list.size(); ++i) {
        double s = 0.0;
        for (size_t j = 0; j < mass[1 - p].size(); ++j) {
          s += mass[1 - p][j] * (p == 0 ? record.tensor.Payoff(0, i, j)
                                        : record.tensor.Payoff(1, j, i));
        }
        list[i].score = s;
      }
    }
    record.candidates = candidates;
    if (iteration >= config.max_outer_iterations) {
      trace.iterations.push_back(std::move(record));
      break;
    }

    for (int p = 0; p < 2; ++p) {
      PsroContext context;
      context.iteration = iteration;
      context.candidates = &candidates;
      context.tensor = &record.tensor;
      context.meta_strategy = &record.meta_strategy;
      const std::vector<std::string> co_labels = candidates.Labels(1 - p);
      const std::vector<double> co_mass = mass[1 - p];
      context.evaluator = [&, p, co_labels, co_mass](const std::string& label) {
        std::array<std::vector<std::string>, 2> labels;
        labels[p] = {label};
        labels[1 - p] = co_labels;
        const PayoffTensor t = estimator(labels);
        double s = 0.0;
        for (size_t j = 0; j < co_mass.size(); ++j) {
          s += co_mass[j] * (p == 0 ? t.Payoff(0, 0, j) : t.Payoff(1, j, 0));
        }
        return s;
      };
      record.responses[p] = oracle.Respond(p, context);
    }

    if (config.append_mode == AppendMode::kPerPlayer) {
      for (int p = 0; p < 2; ++p) {
        if (candidates.Add(p, record.responses[p])) {
          record.new_candidates.push_back(Trim(record.responses[p]));
        }
      }
    } else {
      for (int p = 0; p < 2; ++p) {
        if (!candidates.Contains(0, record.responses[p])) {
          candidates.Add(0, record.responses[p]);
          candidates.Add(1, record.responses[p]);
          record.new_candidates.push_back(Trim(record.responses[p]));
          break;
        }
      }
    }
    const bool grew = !record.new_candidates.empty();
    trace.iterations.push_back(std::move(record));
    if (!grew) {
      trace.converged = true;
      break;
    }
  }
  return trace;
}

PsroTrace RunPsro(const PsroConfig& config, const CandidateSet& initial,
                  const GameFamily& family, const BackendBundle& backends,
                  Proposer& proposer) {
  OperatorResponseOracle oracle(config, proposer);
  TensorEstimator estimator =
      [&](const std::array<std::vector<std::string>, 2>& labels) {
        return EstimatePayoffTensor(labels, family, backends,
                                    config.rollouts_per_cell);
      };
  return RunPsro(config, initial, estimator, oracle);
}

}  // namespace dialogue_games
