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

#include <atomic>
#include <filesystem>
#include <sstream>

#include <unistd.h>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "dialogue_games/game_types.h"
#include "dialogue_games/imitation.h"
#include "dialogue_games/psro.h"
#include "dialogue_games/util.h"

namespace dialogue_games::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    static std::atomic<int> counter{0};
    dir_ = fs::temp_directory_path() /
           ("dgames_cli_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int Run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return CliDispatch(args, out_, err_);
  }
  std::string Path(const std::string& name) const {
    return (dir_ / name).string();
  }
  std::string Read(const std::string& name) const {
    return ReadFile(Path(name));
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(Run({}), kExitUsage);
  EXPECT_EQ(Run({"frobnicate"}), kExitUsage);
  EXPECT_EQ(Run({"--backend", "gpt", "gen"}), kExitUsage);
  EXPECT_EQ(Run({"imitate"}), kExitUsage);
  EXPECT_EQ(Run({"--out", Path("x"), "cfr", "--domain", "chess"}), kExitUsage);
  WriteFile(Path("broken.json"), "{not json");
  EXPECT_EQ(Run({"--config", Path("broken.json"), "--out", Path("x"), "gen"}),
            kExitUsage);
  EXPECT_EQ(Run({"--help"}), kExitOk);
  EXPECT_NE(out_.str().find("eval-table1"), std::string::npos);
}

TEST_F(CliTest, GenWritesConfigsAndManifest) {
  ASSERT_EQ(Run({"--seed", "3", "--out", dir_.string(), "gen", "--domain",
                 "meeting", "--n", "2"}),
            kExitOk)
      << err_.str();
  const GameConfig a = GameConfigFromJson(json::parse(Read("game_3.json")));
  EXPECT_EQ(a.domain_id, DomainId::kMeeting);
  EXPECT_TRUE(fs::exists(Path("game_4.json")));
  const json manifest = json::parse(Read("manifest.json"));
  EXPECT_EQ(manifest["subcommand"], "gen");
  EXPECT_EQ(manifest["seed"], 3);
  EXPECT_EQ(manifest["files"].size(), 2u);
  EXPECT_FALSE(manifest.contains("timestamp"));
}

TEST_F(CliTest, CfrOnConfiguredGame) {
  ASSERT_EQ(Run({"--out", dir_.string(), "gen", "--domain", "debate", "--n",
                 "1"}),
            kExitOk);
  ASSERT_EQ(Run({"--config", Path("game_0.json"), "--out", Path("solve"),
                 "cfr", "--iterations", "20"}),
            kExitOk)
      << err_.str();
  const TabularPolicy policy =
      TabularPolicy::FromJson(json::parse(Read("solve/policy.json")));
  EXPECT_FALSE(policy.table().empty());
  const auto rows = ParseCsv(Read("solve/metrics.csv"));
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0][0], "domain");
  EXPECT_EQ(rows[1][0], "debate");
}

TEST_F(CliTest, Table1IsByteReproducible) {
  std::vector<std::string> common = {"--backend", "stub", "--seed", "7"};
  auto run = [&](const std::string& sub) {
    std::vector<std::string> args = common;
    args.insert(args.end(), {"--out", Path(sub), "eval-table1", "--domain",
                             "fruit", "--num-games", "3", "--iterations",
                             "20"});
    return Run(args);
  };
  ASSERT_EQ(run("a"), kExitOk) << err_.str();
  ASSERT_EQ(run("b"), kExitOk);
  EXPECT_EQ(Read("a/table1.csv"), Read("b/table1.csv"));
  EXPECT_EQ(Read("a/table1_games.csv"), Read("b/table1_games.csv"));
  EXPECT_EQ(Read("a/manifest.json"), Read("b/manifest.json"));
  const json m = json::parse(Read("a/manifest.json"));
  EXPECT_LE(m["generation_backend_calls"].get<int64_t>(),
            m["distinct_transitions"].get<int64_t>());
  EXPECT_GT(m["generation_backend_calls"].get<int64_t>(), 0);
}

TEST_F(CliTest, PsroWithScript) {
  auto run = [&](const std::string& sub) {
    return Run({"--out", Path(sub), "psro", "--num-scenarios", "1",
                "--rollouts", "1", "--iterations", "5", "--script",
                "angry,relaxed,enthusiastic"});
  };
  ASSERT_EQ(run("a"), kExitOk) << err_.str();
  ASSERT_EQ(run("b"), kExitOk);
  EXPECT_EQ(Read("a/trace.json"), Read("b/trace.json"));
  const json trace = json::parse(Read("a/trace.json"));
  EXPECT_TRUE(trace["converged"].get<bool>());
  EXPECT_EQ(ParseCsv(Read("a/marginals.csv"))[0][0], "iteration");
}

TEST_F(CliTest, RewardAndSteering) {
  ASSERT_EQ(Run({"--out", dir_.string(), "eval-reward", "--domain", "fruit",
                 "--n", "50"}),
            kExitOk)
      << err_.str();
  const auto reward = ParseCsv(Read("reward.csv"));
  ASSERT_EQ(reward.size(), 5u);
  for (size_t i = 1; i < reward.size(); ++i) EXPECT_EQ(reward[i][1], "0");

  ASSERT_EQ(Run({"--follow-rate", "1", "--out", dir_.string(),
                 "eval-steering", "--domain", "debate", "--n", "60"}),
            kExitOk);
  const auto steering = ParseCsv(Read("steering.csv"));
  EXPECT_EQ(steering.back()[0], "total");
  EXPECT_EQ(steering.back()[1], "1");
}

TEST_F(CliTest, ImitationAndMetaGame) {
  ASSERT_EQ(Run({"--out", dir_.string(), "imitate", "build-dataset",
                 "--domain", "debate", "--num-games", "2", "--iterations",
                 "5", "--dim", "16"}),
            kExitOk)
      << err_.str();
  const auto data = DatasetFromJsonl(Read("dataset.jsonl"));
  ASSERT_FALSE(data.empty());
  EXPECT_EQ(data[0].embedding.size(), 16u);

  ASSERT_EQ(Run({"--out", Path("model"), "imitate", "train", "--dataset",
                 Path("dataset.jsonl"), "--hidden", "8", "--steps", "200",
                 "--batch", "8"}),
            kExitOk)
      << err_.str();
  const MlpPolicy mlp = MlpPolicy::FromJson(json::parse(Read("model/policy.json")));
  EXPECT_EQ(mlp.input_dim(), 16);
  EXPECT_EQ(ParseCsv(Read("model/loss.csv")).size(), 3u);

  ASSERT_EQ(Run({"--out", Path("meta"), "meta-game", "--domain", "debate",
                 "--num-games", "2", "--iterations", "5", "--cce-iterations",
                 "100", "--mlp", Path("model/policy.json")}),
            kExitOk)
      << err_.str();
  const json election = json::parse(Read("meta/election.json"));
  EXPECT_FALSE(election.empty());
  const auto tensor = PayoffTensor::FromCsv(Read("meta/tensor.csv"));
  EXPECT_EQ(tensor.rows, 4);
}

TEST_F(CliTest, HttpFailureExitsWithBackendCode) {
  WriteFile(Path("run.json"),
            json{{"http",
                  {{"endpoint", "http://127.0.0.1:1/generate"},
                   {"max_attempts", 1},
                   {"initial_backoff_ms", 1}}}}
                .dump());
  EXPECT_EQ(Run({"--config", Path("run.json"), "--backend", "http", "--out",
                 Path("h"), "eval-steering", "--n", "1"}),
            kExitBackend);
  EXPECT_NE(err_.str().find("127.0.0.1"), std::string::npos) << err_.str();
}

TEST_F(CliTest, ScriptedBackendUsesFallback) {
  WriteFile(Path("run.json"),
            json{{"scripted",
                  {{"generator", {{"fallback", {"I accept."}}}},
                   {"classifier", json::object()}}}}
                .dump());
  ASSERT_EQ(Run({"--config", Path("run.json"), "--backend", "scripted",
                 "--out", Path("s"), "eval-steering", "--domain", "fruit",
                 "--n", "30"}),
            kExitOk)
      << err_.str();
  EXPECT_EQ(ParseCsv(Read("s/steering.csv")).back()[0], "total");
}

}  // namespace
}  // namespace dialogue_games::cli
