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

#include "cli.h"

#include <algorithm>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dialogue_games/assets.h"
#include "dialogue_games/cfr.h"
#include "dialogue_games/dialogue_game.h"
#include "dialogue_games/domains.h"
#include "dialogue_games/errors.h"
#include "dialogue_games/evaluation.h"
#include "dialogue_games/game_tree.h"
#include "dialogue_games/http_backends.h"
#include "dialogue_games/imitation.h"
#include "dialogue_games/normal_form.h"
#include "dialogue_games/psro.h"
#include "dialogue_games/stub_backends.h"
#include "dialogue_games/util.h"

namespace dialogue_games::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct GlobalOptions {
  std::string config_path;
  std::string backend = "stub";
  uint64_t seed = 0;
  std::string out = ".";
  double follow_rate = 1.0;
};

// Backends plus the cache in front of the generator, whose miss count is
// the number of real generation calls.
struct Backends {
  BackendBundle bundle;
  std::shared_ptr<CachingGenerator> cache;
};

class Run {
 public:
  Run(const GlobalOptions& global, std::string subcommand, std::ostream& out)
      : global_(global), subcommand_(std::move(subcommand)), out_(out) {
    if (!global_.config_path.empty()) {
      try {
        config_ = json::parse(ReadFile(global_.config_path));
      } catch (const json::exception& e) {
        throw Error(ErrorCode::kConfigInvalid,
                    global_.config_path + ": " + e.what());
      }
    }
    manifest_["subcommand"] = subcommand_;
    manifest_["backend"] = global_.backend;
    manifest_["seed"] = global_.seed;
    manifest_["version"] = DIALOGUE_GAMES_VERSION;
    manifest_["files"] = json::array();
    fs::create_directories(global_.out);
  }

  const json& config() const { return config_; }
  json& manifest() { return manifest_; }
  uint64_t seed() const { return global_.seed; }

  // A full game description: either the whole --config file or its "game"
  // entry.
  std::optional<GameConfig> ConfiguredGame() const {
    if (config_.contains("action_labels")) return GameConfigFromJson(config_);
    if (config_.contains("game")) return GameConfigFromJson(config_["game"]);
    return std::nullopt;
  }

  Backends MakeBackends(DomainId domain) const {
    Backends b;
    std::shared_ptr<TextGenerator> generator;
    if (global_.backend == "stub") {
      b.bundle = MakeStubBundle(config_.value("follow_rate",
                                              global_.follow_rate));
      generator = b.bundle.generator;
    } else if (global_.backend == "http") {
      auto client = std::make_shared<HttpClient>(
          HttpConfig::FromJson(config_.value("http", json::object())));
      generator = std::make_shared<HttpGenerator>(client);
      b.bundle.classifier = std::make_shared<HttpClassifier>(
          client, std::string(Asset("classifier_" +
                                    std::string(DomainName(domain)) +
                                    ".txt")));
      b.bundle.terminator = std::make_shared<HttpTerminator>(client);
      b.bundle.reward = std::make_shared<HttpRewardModel>(client);
    } else if (global_.backend == "scripted") {
      const json scripted = config_.value("scripted", json::object());
      generator = ScriptedGenerator::FromJson(
          scripted.value("generator", json::object()));
      b.bundle.classifier = ScriptedClassifier::FromJson(
          scripted.value("classifier", json::object()));
      b.bundle.terminator = std::make_shared<RuleTerminator>();
      b.bundle.reward = std::make_shared<OracleRewardModel>();
    } else {
      throw Error(ErrorCode::kConfigInvalid,
                  "unknown backend '" + global_.backend + "'");
    }
    b.cache = std::make_shared<CachingGenerator>(generator);
    b.bundle.generator = b.cache;
    return b;
  }

  void Write(const std::string& name, std::string_view contents) {
    WriteFile((fs::path(global_.out) / name).string(), contents);
    manifest_["files"].push_back(name);
  }

  void Finish(const Backends* backends = nullptr) {
    if (backends != nullptr) {
      manifest_["generation_backend_calls"] = backends->cache->backend_calls();
    }
    WriteFile((fs::path(global_.out) / "manifest.json").string(),
              manifest_.dump(2) + "\n");
  }

  std::ostream& out() { return out_; }

 private:
  GlobalOptions global_;
  std::string subcommand_;
  std::ostream& out_;
  json config_ = json::object();
  json manifest_;
};

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  for (char c : text + ",") {
    if (c == ',') {
      if (!Trim(item).empty()) items.push_back(Trim(item));
      item.clear();
    } else {
      item.push_back(c);
    }
  }
  return items;
}

std::vector<DomainId> Domains(const std::string& name) {
  if (name == "all") {
    return {DomainId::kMeeting, DomainId::kFruit, DomainId::kDebate};
  }
  return {ParseDomainId(name)};
}

// What the proposer is asked to list, per domain.
std::string ProposalKind(DomainId domain) {
  switch (domain) {
    case DomainId::kFruit:
      return "tones";
    case DomainId::kMeeting:
      return "days of the week";
    case DomainId::kDebate:
      return "argument styles";
  }
  return "instructions";
}

std::vector<uint64_t> SeedRange(uint64_t first, int n) {
  std::vector<uint64_t> seeds(n);
  for (int i = 0; i < n; ++i) seeds[i] = first + i;
  return seeds;
}

std::string WithoutHeader(const std::string& csv) {
  return csv.substr(csv.find('\n') + 1);
}

void CheckPositive(int value, const std::string& name) {
  if (value < 1) {
    throw Error(ErrorCode::kConfigInvalid, name + " must be >= 1");
  }
}

// gen --------------------------------------------------------------------

struct GenOptions {
  std::string domain = "fruit";
  int n = 1;
};

void RunGen(Run& run, const GenOptions& opt) {
  CheckPositive(opt.n, "--n");
  const DomainId domain = ParseDomainId(opt.domain);
  json hashes = json::array();
  for (int i = 0; i < opt.n; ++i) {
    const uint64_t seed = run.seed() + i;
    const GameConfig config = GenerateGameConfig(domain, seed);
    run.Write("game_" + std::to_string(seed) + ".json",
              ToJson(config).dump(2) + "\n");
    hashes.push_back(ConfigHash(config));
  }
  run.manifest()["domain"] = opt.domain;
  run.manifest()["config_hashes"] = hashes;
  run.Finish();
  run.out() << "wrote " << opt.n << " game configs\n";
}

// cfr --------------------------------------------------------------------

struct CfrOptions {
  std::string domain = "fruit";
  int iterations = 1000;
};

void RunCfr(Run& run, const CfrOptions& opt) {
  CheckPositive(opt.iterations, "--iterations");
  const GameConfig config = run.ConfiguredGame().value_or(
      GenerateGameConfig(ParseDomainId(opt.domain), run.seed()));
  Backends backends = run.MakeBackends(config.domain_id);
  DialogueGame game(config, backends.bundle);
  const GameTree tree = GameTree::Build(game);
  const TabularPolicy policy = CfrSolve(tree, opt.iterations);
  Table1Report report;
  Table1Row row;
  row.domain = std::string(DomainName(config.domain_id));
  row.game_seed = run.seed();
  row.nash_conv = NashConv(tree, policy);
  row.cfr_gain = CfrGain(tree, policy, BaselinePolicy(config));
  row.ess = IsEss(row.nash_conv, row.cfr_gain);
  report.games.push_back(row);
  run.Write("policy.json", policy.ToJson().dump(2) + "\n");
  run.Write("metrics.csv", report.GamesCsv());
  run.manifest()["config_hash"] = ConfigHash(config);
  run.manifest()["iterations"] = opt.iterations;
  run.manifest()["tree"] = {{"leaves", tree.NumLeaves()},
                            {"infostates", tree.infostates().size()}};
  run.Finish(&backends);
  run.out() << report.GamesCsv();
}

// eval-table1 ------------------------------------------------------------

struct Table1Options {
  std::string domain = "all";
  int num_games = 200;
  int iterations = 1000;
};

void RunTable1(Run& run, const Table1Options& opt) {
  CheckPositive(opt.num_games, "--num-games");
  CheckPositive(opt.iterations, "--iterations");
  std::string summary = "domain,nashconv,cfr_gain,ess\n";
  std::string games = "domain,game_seed,nashconv,cfr_gain,ess\n";
  int64_t transitions = 0, backend_calls = 0;
  for (DomainId domain : Domains(opt.domain)) {
    Backends backends = run.MakeBackends(domain);
    const Table1Report report = RunTable1Protocol(
        domain, opt.num_games, opt.iterations, backends.bundle, run.seed());
    summary += WithoutHeader(report.SummaryCsv());
    games += WithoutHeader(report.GamesCsv());
    for (const auto& g : report.games) {
      transitions += g.stats.distinct_transitions;
    }
    backend_calls += backends.cache->backend_calls();
  }
  run.Write("table1.csv", summary);
  run.Write("table1_games.csv", games);
  run.manifest()["domain"] = opt.domain;
  run.manifest()["num_games"] = opt.num_games;
  run.manifest()["iterations"] = opt.iterations;
  run.manifest()["distinct_transitions"] = transitions;
  run.manifest()["generation_backend_calls"] = backend_calls;
  run.Finish();
  run.out() << summary;
}

// psro -------------------------------------------------------------------

struct PsroOptions {
  std::string domain = "fruit";
  std::string op = "shotgun";
  std::string meta_solver = "replicator";
  std::string initial = "any";
  std::string script;
  int k = 1;
  int k_prime = 1;
  int iterations = 3;
  int rollouts = 4;
  int num_scenarios = 4;
  bool shared = false;
};

void RunPsroCommand(Run& run, const PsroOptions& opt) {
  CheckPositive(opt.num_scenarios, "--num-scenarios");
  const DomainId domain = ParseDomainId(opt.domain);
  PsroConfig config;
  config.br_operator = ParseBrOperator(opt.op);
  config.meta_solver = ParseMetaSolver(opt.meta_solver);
  config.k = opt.k;
  config.k_prime = opt.k_prime;
  config.max_outer_iterations = opt.iterations;
  config.rollouts_per_cell = opt.rollouts;
  config.append_mode =
      opt.shared ? AppendMode::kSharedFirstNovel : AppendMode::kPerPlayer;
  config.Validate();
  GameFamily family;
  family.domain = domain;
  family.scenario_seeds = SeedRange(run.seed(), opt.num_scenarios);
  Backends backends = run.MakeBackends(domain);
  std::unique_ptr<Proposer> proposer;
  if (!opt.script.empty()) {
    proposer = std::make_unique<ScriptedProposer>(SplitList(opt.script));
  } else {
    proposer = std::make_unique<LlmProposer>(backends.bundle.generator,
                                             ProposalKind(domain), run.seed());
  }
  const PsroTrace trace =
      RunPsro(config, CandidateSet::Initial(SplitList(opt.initial)), family,
              backends.bundle, *proposer);
  run.Write("trace.json", trace.ToJson().dump(2) + "\n");
  run.Write("marginals.csv", trace.MarginalsCsv());
  run.manifest()["domain"] = opt.domain;
  run.manifest()["operator"] = std::string(BrOperatorName(config.br_operator));
  run.manifest()["meta_solver"] =
      std::string(MetaSolverName(config.meta_solver));
  run.manifest()["scenario_seeds"] = family.scenario_seeds;
  run.manifest()["converged"] = trace.converged;
  run.Finish(&backends);
  const auto& last = trace.iterations.back();
  for (int p = 0; p < 2; ++p) {
    run.out() << "player " << p << ":";
    for (const auto& label : last.candidates.Labels(p)) {
      run.out() << " " << label;
    }
    run.out() << "\n";
  }
}

// eval-reward ------------------------------------------------------------

struct RewardOptions {
  std::string domain = "fruit";
  std::string outcome = "all";
  int n = 1000;
};

void RunReward(Run& run, const RewardOptions& opt) {
  CheckPositive(opt.n, "--n");
  const DomainId domain = ParseDomainId(opt.domain);
  Backends backends = run.MakeBackends(domain);
  OracleRewardModel oracle;
  RewardErrorReport report;
  if (opt.outcome == "all") {
    report = RewardErrorAll(domain, *backends.bundle.reward, oracle, opt.n,
                            run.seed());
  } else {
    report.rows.push_back(RewardError(domain, *backends.bundle.reward, oracle,
                                      ParseOutcomeTag(opt.outcome), opt.n,
                                      run.seed()));
  }
  run.Write("reward.csv", report.ToCsv());
  run.manifest()["domain"] = opt.domain;
  run.manifest()["outcome"] = opt.outcome;
  run.manifest()["n"] = opt.n;
  run.Finish(&backends);
  run.out() << report.ToCsv();
}

// eval-steering ----------------------------------------------------------

struct SteeringOptions {
  std::string domain = "fruit";
  std::string labels;
  int n = 1000;
};

void RunSteering(Run& run, const SteeringOptions& opt) {
  CheckPositive(opt.n, "--n");
  const DomainId domain = ParseDomainId(opt.domain);
  std::vector<std::string> labels = SplitList(opt.labels);
  if (labels.empty()) {
    for (const auto& label : DefaultActionLabels(domain)) {
      if (NormalizeLabel(label) != kAnyLabel) labels.push_back(label);
    }
  }
  Backends backends = run.MakeBackends(domain);
  const SteeringReport report =
      SteeringAccuracy(domain, *backends.bundle.generator,
                       *backends.bundle.classifier, labels, opt.n, run.seed());
  run.Write("steering.csv", report.ToCsv());
  run.manifest()["domain"] = opt.domain;
  run.manifest()["labels"] = labels;
  run.manifest()["ambiguous"] = report.ambiguous;
  run.Finish(&backends);
  run.out() << report.ToCsv();
}

// imitate ----------------------------------------------------------------

struct DatasetOptions {
  std::string domain = "fruit";
  int num_games = 10;
  int iterations = 1000;
  int dim = 768;
};

void RunBuildDataset(Run& run, const DatasetOptions& opt) {
  CheckPositive(opt.num_games, "--num-games");
  const DomainId domain = ParseDomainId(opt.domain);
  Backends backends = run.MakeBackends(domain);
  const HashingEmbedder embedder(opt.dim);
  const auto dataset = BuildDataset(opt.num_games, domain, opt.iterations,
                                    backends.bundle, embedder, run.seed());
  run.Write("dataset.jsonl", DatasetToJsonl(dataset));
  run.manifest()["domain"] = opt.domain;
  run.manifest()["game_seeds"] = SeedRange(run.seed(), opt.num_games);
  run.manifest()["embedding_dim"] = opt.dim;
  run.manifest()["examples"] = dataset.size();
  run.Finish(&backends);
  run.out() << "wrote " << dataset.size() << " examples\n";
}

struct TrainOptions {
  std::string dataset;
  int hidden = 256;
  TrainConfig train;
};

void RunTrain(Run& run, const TrainOptions& opt) {
  const auto data = DatasetFromJsonl(ReadFile(opt.dataset));
  if (data.empty()) {
    throw Error(ErrorCode::kConfigInvalid, "dataset is empty");
  }
  TrainConfig train = opt.train;
  train.rng_seed = run.seed();
  train.Validate();
  MlpPolicy init = MlpPolicy::Random(
      static_cast<int>(data[0].embedding.size()),
      static_cast<int>(data[0].target.size()), run.seed(), opt.hidden);
  const TrainResult result = Train(std::move(init), data, train);
  run.Write("policy.json", result.policy.ToJson().dump() + "\n");
  run.Write("loss.csv", LossCurveCsv(result.loss_curve));
  run.manifest()["dataset"] = opt.dataset;
  run.manifest()["examples"] = data.size();
  run.manifest()["steps"] = train.steps;
  run.manifest()["batch_size"] = train.batch_size;
  run.manifest()["learning_rate"] = train.learning_rate;
  run.Finish();
  if (!result.loss_curve.empty()) {
    run.out() << "final loss " << FormatDouble(result.loss_curve.back().loss)
              << "\n";
  }
}

// meta-game --------------------------------------------------------------

struct MetaGameOptions {
  std::string domain = "fruit";
  int num_games = 5;
  int iterations = 1000;
  int cce_iterations = 10'000;
  std::vector<std::string> mlp_paths;
};

void RunMetaGame(Run& run, const MetaGameOptions& opt) {
  CheckPositive(opt.num_games, "--num-games");
  CheckPositive(opt.iterations, "--iterations");
  const DomainId domain = ParseDomainId(opt.domain);
  Backends backends = run.MakeBackends(domain);
  std::vector<GameConfig> games;
  // Infostate keys carry the scenario, so one table covers every game.
  auto cfr = std::make_shared<TabularPolicy>();
  for (uint64_t seed : SeedRange(run.seed(), opt.num_games)) {
    games.push_back(GenerateGameConfig(domain, seed));
    DialogueGame game(games.back(), backends.bundle);
    const GameTree tree = GameTree::Build(game);
    const TabularPolicy solved = CfrSolve(tree, opt.iterations);
    for (const auto& [key, probs] : solved.table()) {
      cfr->Set(key, probs);
    }
  }
  std::vector<ElectionOption> options = {
      {"any", std::make_shared<FixedActionPolicy>(
                  BaselinePolicy(games.front()))},
      {"uniform", std::make_shared<UniformPolicy>()},
      {"cfr", cfr}};
  for (const auto& path : opt.mlp_paths) {
    auto mlp = std::make_shared<const MlpPolicy>(
        MlpPolicy::FromJson(json::parse(ReadFile(path))));
    auto embedder = std::make_shared<const HashingEmbedder>(
        static_cast<int>(mlp->w1.cols()));
    options.push_back({fs::path(path).stem().string(),
                       std::make_shared<MlpPolicyAdapter>(mlp, embedder)});
  }
  const ElectionResult result =
      MetaGameElection(games, options, backends.bundle, opt.cce_iterations);
  json election = {{"options", json::array()},
                   {"joint", result.joint.ToJson()}};
  std::string csv = "option,selection\n";
  for (size_t i = 0; i < options.size(); ++i) {
    election["options"].push_back(
        {{"name", options[i].name}, {"selection", result.selection[i]}});
    csv += CsvEscape(options[i].name) + "," +
           FormatDouble(result.selection[i]) + "\n";
  }
  run.Write("election.json", election.dump(2) + "\n");
  run.Write("selection.csv", csv);
  run.Write("tensor.csv", result.tensor.ToCsv());
  run.manifest()["domain"] = opt.domain;
  run.manifest()["game_seeds"] = SeedRange(run.seed(), opt.num_games);
  run.Finish(&backends);
  run.out() << csv;
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kBackendFailure:
    case ErrorCode::kProposerExhausted:
    case ErrorCode::kDivergence:
    case ErrorCode::kNonFiniteLoss:
      return kExitBackend;
    default:
      return kExitUsage;
  }
}

}  // namespace

int CliDispatch(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  CLI::App app("Dialogue games: equilibrium solvers for LLM dialogue.",
               "dgames");
  app.require_subcommand(1);
  app.fallthrough();
  GlobalOptions global;
  app.add_option("--config", global.config_path, "Run configuration JSON");
  app.add_option("--backend", global.backend, "stub, http or scripted")
      ->check(CLI::IsMember({"stub", "http", "scripted"}));
  app.add_option("--seed", global.seed, "Base seed");
  app.add_option("--out", global.out, "Output directory");
  app.add_option("--follow-rate", global.follow_rate,
                 "Stub generator instruction-following rate")
      ->check(CLI::Range(0.0, 1.0));

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write N game configs");
  gen_cmd->add_option("--domain", gen.domain);
  gen_cmd->add_option("--n", gen.n);

  CfrOptions cfr;
  auto* cfr_cmd = app.add_subcommand("cfr", "Solve one game with CFR");
  cfr_cmd->add_option("--domain", cfr.domain,
                      "Domain of the generated game when --config has none");
  cfr_cmd->add_option("--iterations", cfr.iterations);

  Table1Options table1;
  auto* table1_cmd =
      app.add_subcommand("eval-table1", "NashConv / CFR gain / ESS table");
  table1_cmd->add_option("--domain", table1.domain, "fruit, meeting, debate "
                                                     "or all");
  table1_cmd->add_option("--num-games", table1.num_games);
  table1_cmd->add_option("--iterations", table1.iterations);

  PsroOptions psro;
  auto* psro_cmd = app.add_subcommand("psro", "Prompt-space response oracles");
  psro_cmd->add_option("--domain", psro.domain);
  psro_cmd->add_option("--operator", psro.op,
                       "shotgun, better, trajectory or categorical");
  psro_cmd->add_option("--meta-solver", psro.meta_solver,
                       "cce, replicator or bargaining");
  psro_cmd->add_option("--initial", psro.initial,
                       "Comma-separated initial labels");
  psro_cmd->add_option("--script", psro.script,
                       "Comma-separated proposals instead of the backend");
  psro_cmd->add_option("--k", psro.k);
  psro_cmd->add_option("--k-prime", psro.k_prime);
  psro_cmd->add_option("--iterations", psro.iterations);
  psro_cmd->add_option("--rollouts", psro.rollouts);
  psro_cmd->add_option("--num-scenarios", psro.num_scenarios);
  psro_cmd->add_flag("--shared", psro.shared,
                     "One shared candidate set for both players");

  RewardOptions reward;
  auto* reward_cmd =
      app.add_subcommand("eval-reward", "Reward model Norm/Sgn errors");
  reward_cmd->add_option("--domain", reward.domain)
      ->check(CLI::IsMember({"fruit", "meeting"}));
  reward_cmd->add_option("--outcome", reward.outcome)
      ->check(CLI::IsMember({"all", "valid", "rejected", "incomplete"}));
  reward_cmd->add_option("--n", reward.n, "Scenarios per outcome");

  SteeringOptions steering;
  auto* steering_cmd =
      app.add_subcommand("eval-steering", "Instruction steering accuracy");
  steering_cmd->add_option("--domain", steering.domain);
  steering_cmd->add_option("--labels", steering.labels,
                           "Comma-separated labels");
  steering_cmd->add_option("--n", steering.n);

  auto* imitate_cmd =
      app.add_subcommand("imitate", "Distill CFR policies into an MLP");
  imitate_cmd->require_subcommand(1);
  DatasetOptions dataset;
  auto* dataset_cmd =
      imitate_cmd->add_subcommand("build-dataset", "CFR targets to JSONL");
  dataset_cmd->add_option("--domain", dataset.domain);
  dataset_cmd->add_option("--num-games", dataset.num_games);
  dataset_cmd->add_option("--iterations", dataset.iterations);
  dataset_cmd->add_option("--dim", dataset.dim, "Embedding dimension");
  TrainOptions train;
  auto* train_cmd = imitate_cmd->add_subcommand("train", "Fit the MLP");
  train_cmd->add_option("--dataset", train.dataset)->required();
  train_cmd->add_option("--hidden", train.hidden);
  train_cmd->add_option("--steps", train.train.steps);
  train_cmd->add_option("--batch", train.train.batch_size);
  train_cmd->add_option("--lr", train.train.learning_rate);

  MetaGameOptions meta;
  auto* meta_cmd =
      app.add_subcommand("meta-game", "Elect a policy via a meta-game");
  meta_cmd->add_option("--domain", meta.domain);
  meta_cmd->add_option("--num-games", meta.num_games);
  meta_cmd->add_option("--iterations", meta.iterations);
  meta_cmd->add_option("--cce-iterations", meta.cce_iterations);
  meta_cmd->add_option("--mlp", meta.mlp_paths, "Trained policy.json files");

  try {
    // CLI11 consumes arguments from the back.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (gen_cmd->parsed()) {
      Run run(global, "gen", out);
      RunGen(run, gen);
    } else if (cfr_cmd->parsed()) {
      Run run(global, "cfr", out);
      RunCfr(run, cfr);
    } else if (table1_cmd->parsed()) {
      Run run(global, "eval-table1", out);
      RunTable1(run, table1);
    } else if (psro_cmd->parsed()) {
      Run run(global, "psro", out);
      RunPsroCommand(run, psro);
    } else if (reward_cmd->parsed()) {
      Run run(global, "eval-reward", out);
      RunReward(run, reward);
    } else if (steering_cmd->parsed()) {
      Run run(global, "eval-steering", out);
      RunSteering(run, steering);
    } else if (dataset_cmd->parsed()) {
      Run run(global, "imitate build-dataset", out);
      RunBuildDataset(run, dataset);
    } else if (train_cmd->parsed()) {
      Run run(global, "imitate train", out);
      RunTrain(run, train);
    } else if (meta_cmd->parsed()) {
      Run run(global, "meta-game", out);
      RunMetaGame(run, meta);
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const fs::filesystem_error& e) {
    err << e.what() << "\n";
    return kExitUsage;
  } catch (const json::exception& e) {
    err << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace dialogue_games::cli
