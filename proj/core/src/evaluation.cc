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

#include "dialogue_games/evaluation.h"

#include <algorithm>
#include <cmath>

#include "dialogue_games/cfr.h"
#include "dialogue_games/dialogue_game.h"
#include "dialogue_games/errors.h"
#include "dialogue_games/game_tree.h"
#include "dialogue_games/util.h"

namespace dialogue_games {
namespace {

struct ErrorSums {
  std::vector<double> abs_errors;  // Already divided by the utility range.
  int64_t sign_mismatches = 0;
};

void Accumulate(DomainId domain, RewardModel& model, RewardModel& oracle,
                OutcomeTag outcome, int num_scenarios, uint64_t rng_seed,
                ErrorSums& sums) {
  if (num_scenarios < 1) {
    throw Error(ErrorCode::kConfigInvalid, "num_scenarios must be >= 1");
  }
  Rng rng(rng_seed);
  for (int i = 0; i < num_scenarios; ++i) {
    const OutcomeScenario s = GenerateOutcomeScenario(domain, outcome, rng);
    const RewardJudgment truth = oracle.Score(s.transcript, s.config);
    const RewardJudgment predicted = model.Score(s.transcript, s.config);
    if (truth.values.size() != 2 || predicted.values.size() != 2) {
      throw Error(ErrorCode::kBackendFailure,
                  "reward models must score both players");
    }
    const double range = s.config.max_utility - s.config.min_utility;
    for (int p = 0; p < 2; ++p) {
      sums.abs_errors.push_back(
          std::abs(predicted.values[p] - truth.values[p]) / range);
      if (SignBucket(predicted.values[p]) != SignBucket(truth.values[p])) {
        ++sums.sign_mismatches;
      }
    }
  }
}

RewardErrorRow RowFrom(std::string outcome, const ErrorSums& sums) {
  RewardErrorRow row;
  row.outcome = std::move(outcome);
  row.samples = static_cast<int64_t>(sums.abs_errors.size());
  row.norm = StableSum(sums.abs_errors) / row.samples;
  row.sgn = static_cast<double>(sums.sign_mismatches) / row.samples;
  return row;
}

}  // namespace

double SteeringReport::Accuracy(int label) const {
  return samples.at(label) ? static_cast<double>(correct.at(label)) /
                                 samples.at(label)
                           : 0.0;
}

int64_t SteeringReport::TotalSamples() const {
  int64_t n = 0;
  for (auto s : samples) n += s;
  return n;
}

int64_t SteeringReport::TotalCorrect() const {
  int64_t n = 0;
  for (auto c : correct) n += c;
  return n;
}

double SteeringReport::Overall() const {
  const int64_t n = TotalSamples();
  return n ? static_cast<double>(TotalCorrect()) / n : 0.0;
}

std::string SteeringReport::ToCsv() const {
  std::string out = "label,accuracy,samples\n";
  for (size_t i = 0; i < labels.size(); ++i) {
    out += CsvEscape(labels[i]) + "," + FormatDouble(Accuracy(i)) + "," +
           std::to_string(samples[i]) + "\n";
  }
  out += "total," + FormatDouble(Overall()) + "," +
         std::to_string(TotalSamples()) + "\n";
  return out;
}

SteeringReport SteeringReport::FromCsv(std::string_view csv) {
  const auto rows = ParseCsv(csv);
  if (rows.empty() ||
      rows[0] != std::vector<std::string>{"label", "accuracy", "samples"}) {
    throw Error(ErrorCode::kParseError, "steering CSV needs the standard header");
  }
  SteeringReport report;
  for (size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 3) {
      throw Error(ErrorCode::kParseError, "steering CSV row needs 3 fields");
    }
    if (rows[i][0] == "total" && i + 1 == rows.size()) break;
    const double accuracy = ParseDouble(rows[i][1]);
    const int64_t n = std::stoll(rows[i][2]);
    report.labels.push_back(rows[i][0]);
    report.samples.push_back(n);
    report.correct.push_back(std::llround(accuracy * n));
  }
  return report;
}

SteeringReport SteeringAccuracy(DomainId domain, TextGenerator& generator,
                                ActionClassifier& classifier,
                                const std::vector<std::string>& labels,
                                int num_samples, uint64_t rng_seed) {
  if (num_samples < 1 || labels.empty()) {
    throw Error(ErrorCode::kConfigInvalid,
                "steering needs labels and at least one sample");
  }
  SteeringReport report;
  report.labels = labels;
  report.correct.assign(labels.size(), 0);
  report.samples.assign(labels.size(), 0);
  std::vector<std::string> menu = labels;
  if (std::none_of(menu.begin(), menu.end(), [](const std::string& l) {
        return NormalizeLabel(l) == kAnyLabel;
      })) {
    menu.emplace_back(kAnyLabel);
  }
  Rng rng(rng_seed);
  for (int i = 0; i < num_samples; ++i) {
    const int label = static_cast<int>(UniformInt(rng, 0, labels.size() - 1));
    const uint64_t scenario_seed = rng();
    const GameConfig config =
        MakeDomainConfig(domain, GenerateScenario(domain, scenario_seed), menu);
    // The receiver of the opening message writes the reply.
    const int opener = config.PlayerIndex(config.scenario.sender);
    const int writer = 1 - opener;
    const std::vector<MessageEvent> thread = {
        {opener, config.scenario.opening_message}};
    GenerationRequest request;
    request.prompt = RenderGenerationPrompt(config, thread, writer, label);
    request.seed = static_cast<int>(i);
    request.context.domain = domain;
    request.context.action_label = labels[label];
    request.context.action_labels = labels;
    request.context.sender = config.player_names[writer];
    request.context.receiver = config.player_names[opener];
    const std::string message = generator.Generate(request);
    const auto probs = classifier.Classify(message, labels);
    const auto best = ArgmaxSet(probs);
    const bool hit = std::find(best.begin(), best.end(), label) != best.end();
    ++report.samples[label];
    if (hit) {
      ++report.correct[label];
      if (best.size() > 1) ++report.ambiguous;
    }
  }
  return report;
}

int SignBucket(double value) {
  if (std::abs(value) <= 1e-9) return 0;
  return value > 0 ? 1 : -1;
}

std::string RewardErrorReport::ToCsv() const {
  std::string out = "outcome,norm,sgn,samples\n";
  for (const auto& r : rows) {
    out += CsvEscape(r.outcome) + "," + FormatDouble(r.norm) + "," +
           FormatDouble(r.sgn) + "," + std::to_string(r.samples) + "\n";
  }
  return out;
}

RewardErrorReport RewardErrorReport::FromCsv(std::string_view csv) {
  const auto rows = ParseCsv(csv);
  if (rows.empty() || rows[0] != std::vector<std::string>{"outcome", "norm",
                                                          "sgn", "samples"}) {
    throw Error(ErrorCode::kParseError, "reward CSV needs the standard header");
  }
  RewardErrorReport report;
  for (size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 4) {
      throw Error(ErrorCode::kParseError, "reward CSV row needs 4 fields");
    }
    report.rows.push_back({rows[i][0], ParseDouble(rows[i][1]),
                           ParseDouble(rows[i][2]), std::stoll(rows[i][3])});
  }
  return report;
}

OutcomeScenario GenerateOutcomeScenario(DomainId domain, OutcomeTag outcome,
                                        Rng& rng) {
  if (domain == DomainId::kDebate) {
    throw Error(ErrorCode::kUnknownDomain,
                "templated outcomes exist for fruit and meeting only");
  }
  Scenario scenario = GenerateScenario(domain, rng());
  OutcomeParams params;
  params.sender = scenario.sender;
  params.receiver = scenario.receiver;
  if (domain == DomainId::kFruit) {
    FruitScenario fruit = FruitScenario::FromScenario(scenario);
    const int give = static_cast<int>(UniformInt(rng, 0, kFruits.size() - 1));
    int receive = static_cast<int>(UniformInt(rng, 0, kFruits.size() - 2));
    if (receive >= give) ++receive;
    params.fruit_give = kFruits[give];
    params.fruit_receive = kFruits[receive];
    if (outcome == OutcomeTag::kValid) {
      // Both sides must be able to cover their part of the trade.
      int& mine = fruit.endowment[0][params.fruit_give];
      int& theirs = fruit.endowment[1][params.fruit_receive];
      if (mine < 1) mine = static_cast<int>(UniformInt(rng, 1, 4));
      if (theirs < 1) theirs = static_cast<int>(UniformInt(rng, 1, 4));
      params.num_give = static_cast<int>(UniformInt(rng, 1, mine));
      params.num_receive = static_cast<int>(UniformInt(rng, 1, theirs));
      fruit.WriteTo(scenario);
    } else {
      params.num_give = static_cast<int>(UniformInt(rng, 1, 4));
      params.num_receive = static_cast<int>(UniformInt(rng, 1, 4));
    }
  } else {
    MeetingScenario meeting = MeetingScenario::FromScenario(scenario);
    const auto& mine = meeting.available_days[0];
    params.day = mine[UniformInt(rng, 0, mine.size() - 1)];
    if (outcome == OutcomeTag::kValid && !meeting.Available(1, params.day)) {
      auto& theirs = meeting.available_days[1];
      theirs.push_back(params.day);
      std::sort(theirs.begin(), theirs.end(), [](const auto& a, const auto& b) {
        return std::find(kDays.begin(), kDays.end(), a) <
               std::find(kDays.begin(), kDays.end(), b);
      });
      meeting.WriteTo(scenario);
    }
  }
  const auto texts = RenderOutcomeTemplate(domain, outcome, params);
  scenario.opening_message = texts[0];
  OutcomeScenario out;
  out.config = MakeDomainConfig(domain, scenario);
  out.params = params;
  out.transcript.messages = {{0, texts[0]}, {1, texts[1]}};
  out.transcript.thread = RenderThread(out.config, out.transcript.messages);
  return out;
}

RewardErrorRow RewardError(DomainId domain, RewardModel& model,
                           RewardModel& oracle, OutcomeTag outcome,
                           int num_scenarios, uint64_t rng_seed) {
  ErrorSums sums;
  Accumulate(domain, model, oracle, outcome, num_scenarios, rng_seed, sums);
  return RowFrom(std::string(OutcomeTagName(outcome)), sums);
}

RewardErrorReport RewardErrorAll(DomainId domain, RewardModel& model,
                                 RewardModel& oracle, int num_scenarios,
                                 uint64_t rng_seed) {
  RewardErrorReport report;
  ErrorSums all;
  for (OutcomeTag outcome :
       {OutcomeTag::kValid, OutcomeTag::kRejected, OutcomeTag::kIncomplete}) {
    ErrorSums sums;
    Accumulate(domain, model, oracle, outcome, num_scenarios,
               MixHash(rng_seed, static_cast<uint64_t>(outcome)), sums);
    report.rows.push_back(RowFrom(std::string(OutcomeTagName(outcome)), sums));
    all.abs_errors.insert(all.abs_errors.end(), sums.abs_errors.begin(),
                          sums.abs_errors.end());
    all.sign_mismatches += sums.sign_mismatches;
  }
  report.rows.push_back(RowFrom("All", all));
  return report;
}

std::string Table1Report::SummaryCsv() const {
  return "domain,nashconv,cfr_gain,ess\n" + CsvEscape(average.domain) + "," +
         FormatDouble(average.nash_conv) + "," + FormatDouble(average.cfr_gain) +
         "," + (average.ess ? "true" : "false") + "\n";
}

std::string Table1Report::GamesCsv() const {
  std::string out = "domain,game_seed,nashconv,cfr_gain,ess\n";
  for (const auto& g : games) {
    out += CsvEscape(g.domain) + "," + std::to_string(g.game_seed) + "," +
           FormatDouble(g.nash_conv) + "," + FormatDouble(g.cfr_gain) + "," +
           (g.ess ? "true" : "false") + "\n";
  }
  return out;
}

Table1Row EvaluateGame(const GameConfig& config, uint64_t game_seed,
                       int cfr_iterations, const BackendBundle& backends) {
  DialogueGame game(config, backends);
  const GameTree tree = GameTree::Build(game);
  const TabularPolicy policy = CfrSolve(tree, cfr_iterations);
  const FixedActionPolicy baseline = BaselinePolicy(config);
  Table1Row row;
  row.domain = std::string(DomainName(config.domain_id));
  row.game_seed = game_seed;
  row.nash_conv = NashConv(tree, policy);
  row.cfr_gain = CfrGain(tree, policy, baseline);
  row.ess = IsEss(row.nash_conv, row.cfr_gain);
  row.stats = game.stats();
  return row;
}

Table1Report RunTable1Protocol(const std::vector<GameConfig>& games,
                               const std::vector<uint64_t>& game_seeds,
                               int cfr_iterations,
                               const BackendBundle& backends) {
  if (games.empty() || games.size() != game_seeds.size()) {
    throw Error(ErrorCode::kConfigInvalid,
                "need one seed per game and at least one game");
  }
  Table1Report report;
  std::vector<double> conv, gain;
  for (size_t i = 0; i < games.size(); ++i) {
    report.games.push_back(
        EvaluateGame(games[i], game_seeds[i], cfr_iterations, backends));
    conv.push_back(report.games.back().nash_conv);
    gain.push_back(report.games.back().cfr_gain);
  }
  report.average.domain = report.games.front().domain;
  report.average.nash_conv = StableSum(conv) / conv.size();
  report.average.cfr_gain = StableSum(gain) / gain.size();
  report.average.ess = IsEss(report.average.nash_conv, report.average.cfr_gain);
  return report;
}

Table1Report RunTable1Protocol(DomainId domain, int num_games,
                               int cfr_iterations,
                               const BackendBundle& backends,
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
  return RunTable1Protocol(games, seeds, cfr_iterations, backends);
}

}  // namespace dialogue_games
