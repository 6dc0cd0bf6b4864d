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

#ifndef DIALOGUE_GAMES_HTTP_BACKENDS_H_
#define DIALOGUE_GAMES_HTTP_BACKENDS_H_

#include <atomic>
#include <chrono>
#include <memory>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dialogue_games/backends.h"

namespace dialogue_games {

struct HttpConfig {
  // Full URL of the completion endpoint, e.g. http://localhost:8080/generate.
  std::string endpoint;
  // Sent as "Authorization: Bearer <token>" when non-empty.
  std::string token;
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{250};
  std::chrono::milliseconds timeout{60'000};
  int max_in_flight = 4;

  // Reads GTLLM_ENDPOINT and GTLLM_TOKEN.
  static HttpConfig FromEnvironment();
  // Optional keys: endpoint, token, max_attempts, initial_backoff_ms,
  // timeout_ms, max_in_flight. Environment variables fill missing
  // endpoint/token.
  static HttpConfig FromJson(const nlohmann::json& json);
};

// Completion client for the wire format
//   request  {"prompt": str, "seed": int, "max_tokens": int}
//   response {"text": str}
// Retries failed calls with exponential backoff, then throws
// Error(kBackendFailure). Bounds concurrent requests by max_in_flight.
class HttpClient {
 public:
  explicit HttpClient(HttpConfig config);
  ~HttpClient();

  std::string Complete(const std::string& prompt, int seed, int max_tokens);
  int64_t requests_sent() const { return requests_sent_.load(); }
  const HttpConfig& config() const { return config_; }

 private:
  HttpConfig config_;
  std::string scheme_host_port_;
  std::string path_;
  std::counting_semaphore<> in_flight_;
  std::atomic<int64_t> requests_sent_{0};
};

class HttpGenerator : public TextGenerator {
 public:
  explicit HttpGenerator(std::shared_ptr<HttpClient> client);
  std::string Generate(const GenerationRequest& request) override;

 private:
  std::shared_ptr<HttpClient> client_;
};

// Wraps a classifier instruction text (classifier_*.txt assets) around the
// message and maps the model's one-word answer onto a one-hot vector.
// Answers that match no label give the uniform vector.
class HttpClassifier : public ActionClassifier {
 public:
  HttpClassifier(std::shared_ptr<HttpClient> client,
                 std::string instructions);
  std::vector<double> Classify(std::string_view message,
                               std::span<const std::string> labels) override;

  static std::string BuildPrompt(std::string_view instructions,
                                 std::string_view message);
  static std::vector<double> ParseAnswer(std::string_view answer,
                                         std::span<const std::string> labels);

 private:
  std::shared_ptr<HttpClient> client_;
  std::string instructions_;
};

// Asks the model whether the conversation has ended (terminator.txt).
class HttpTerminator : public TerminationJudge {
 public:
  explicit HttpTerminator(std::shared_ptr<HttpClient> client);
  bool IsTerminal(const Transcript& transcript,
                  const GameConfig& config) override;

 private:
  std::shared_ptr<HttpClient> client_;
};

// Few-shot reward prompt (reward_<domain>.txt). The answer must contain
// "Utility for player <i> is <x>" lines and may contain "Outcome: <tag>".
class HttpRewardModel : public RewardModel {
 public:
  explicit HttpRewardModel(std::shared_ptr<HttpClient> client);
  RewardJudgment Score(const Transcript& transcript,
                       const GameConfig& config) override;

  static std::string BuildPrompt(const Transcript& transcript,
                                 const GameConfig& config);
  // Missing utilities mark the judgment as a parse failure with zeros.
  static RewardJudgment ParseAnswer(std::string_view answer, int num_players);

 private:
  std::shared_ptr<HttpClient> client_;
};

}  // namespace dialogue_games

#endif  // DIALOGUE_GAMES_HTTP_BACKENDS_H_
