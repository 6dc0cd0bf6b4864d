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

#include "dialogue_games/http_backends.h"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <regex>
#include <thread>

#include <httplib.h>

#include "dialogue_games/assets.h"
#include "dialogue_games/errors.h"
#include "dialogue_games/util.h"

namespace dialogue_games {
namespace {

std::string EnvOr(const char* name, std::string fallback) {
  const char* value = std::getenv(name);
  return value ? std::string(value) : fallback;
}

// Holds a semaphore slot for the duration of one request.
class SlotGuard {
 public:
  explicit SlotGuard(std::counting_semaphore<>& sem) : sem_(sem) {
    sem_.acquire();
  }
  ~SlotGuard() { sem_.release(); }

 private:
  std::counting_semaphore<>& sem_;
};

std::string FirstWord(std::string_view answer) {
  std::string word;
  for (char c : Trim(answer)) {
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-') {
      word.push_back(c);
    } else if (!word.empty()) {
      break;
    }
  }
  return ToLower(word);
}

}  // namespace

HttpConfig HttpConfig::FromEnvironment() {
  HttpConfig config;
  config.endpoint = EnvOr("GTLLM_ENDPOINT", "");
  config.token = EnvOr("GTLLM_TOKEN", "");
  return config;
}

HttpConfig HttpConfig::FromJson(const nlohmann::json& json) {
  HttpConfig config = FromEnvironment();
  try {
    if (json.contains("endpoint")) config.endpoint = json.at("endpoint");
    if (json.contains("token")) config.token = json.at("token");
    if (json.contains("max_attempts")) {
      config.max_attempts = json.at("max_attempts");
    }
    if (json.contains("initial_backoff_ms")) {
      config.initial_backoff =
          std::chrono::milliseconds(json.at("initial_backoff_ms").get<int>());
    }
    if (json.contains("timeout_ms")) {
      config.timeout =
          std::chrono::milliseconds(json.at("timeout_ms").get<int>());
    }
    if (json.contains("max_in_flight")) {
      config.max_in_flight = json.at("max_in_flight");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigInvalid,
                std::string("http backend config: ") + e.what());
  }
  return config;
}

HttpClient::HttpClient(HttpConfig config)
    : config_(std::move(config)),
      in_flight_(std::max(1, config_.max_in_flight)) {
  if (config_.endpoint.empty()) {
    throw Error(ErrorCode::kConfigInvalid,
                "http backend needs an endpoint (set GTLLM_ENDPOINT)");
  }
  if (config_.max_attempts < 1 || config_.max_in_flight < 1) {
    throw Error(ErrorCode::kConfigInvalid,
                "max_attempts and max_in_flight must be >= 1");
  }
  static const std::regex kUrl(R"(^(http://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(config_.endpoint, m, kUrl)) {
    throw Error(ErrorCode::kConfigInvalid,
                "endpoint must look like http://host[:port]/path: " +
                    config_.endpoint);
  }
  scheme_host_port_ = m[1];
  path_ = m[2].matched ? std::string(m[2]) : "/";
}

HttpClient::~HttpClient() = default;

std::string HttpClient::Complete(const std::string& prompt, int seed,
                                 int max_tokens) {
  const nlohmann::json body = {
      {"prompt", prompt}, {"seed", seed}, {"max_tokens", max_tokens}};
  const std::string payload = body.dump();
  httplib::Headers headers;
  if (!config_.token.empty()) {
    headers.emplace("Authorization", "Bearer " + config_.token);
  }
  std::string last_error;
  auto backoff = config_.initial_backoff;
  for (int attempt = 0; attempt < config_.max_attempts; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    SlotGuard slot(in_flight_);
    httplib::Client client(scheme_host_port_);
    client.set_connection_timeout(config_.timeout);
    client.set_read_timeout(config_.timeout);
    client.set_write_timeout(config_.timeout);
    ++requests_sent_;
    auto res = client.Post(path_, headers, payload, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      last_error = "status " + std::to_string(res->status);
      // Client errors other than throttling will not improve on retry.
      if (res->status >= 400 && res->status < 500 && res->status != 429) break;
      continue;
    }
    try {
      const auto reply = nlohmann::json::parse(res->body);
      return reply.at("text").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      last_error = std::string("malformed response: ") + e.what();
    }
  }
  throw Error(ErrorCode::kBackendFailure,
              config_.endpoint + " failed: " + last_error);
}

HttpGenerator::HttpGenerator(std::shared_ptr<HttpClient> client)
    : client_(std::move(client)) {}

std::string HttpGenerator::Generate(const GenerationRequest& request) {
  return Trim(client_->Complete(request.prompt, request.seed,
                                request.max_tokens));
}

HttpClassifier::HttpClassifier(std::shared_ptr<HttpClient> client,
                               std::string instructions)
    : client_(std::move(client)), instructions_(std::move(instructions)) {}

std::string HttpClassifier::BuildPrompt(std::string_view instructions,
                                        std::string_view message) {
  return StripTrailingNewlines(instructions) + " " + std::string(message) +
         "\n\nAnswer:";
}

std::vector<double> HttpClassifier::ParseAnswer(
    std::string_view answer, std::span<const std::string> labels) {
  std::vector<double> probs(labels.size(), 0.0);
  const std::string word = FirstWord(answer);
  for (size_t i = 0; i < labels.size(); ++i) {
    if (NormalizeLabel(labels[i]) == word) {
      probs[i] = 1.0;
      return probs;
    }
  }
  std::fill(probs.begin(), probs.end(), 1.0 / labels.size());
  return probs;
}

std::vector<double> HttpClassifier::Classify(
    std::string_view message, std::span<const std::string> labels) {
  if (labels.empty()) {
    throw Error(ErrorCode::kConfigInvalid, "classifier needs labels");
  }
  return ParseAnswer(client_->Complete(BuildPrompt(instructions_, message), 0,
                                       8),
                     labels);
}

HttpTerminator::HttpTerminator(std::shared_ptr<HttpClient> client)
    : client_(std::move(client)) {}

bool HttpTerminator::IsTerminal(const Transcript& transcript,
                                const GameConfig&) {
  const std::string prompt = ReplaceAll(std::string(Asset("terminator.txt")),
                                        "{thread}", transcript.thread);
  return FirstWord(client_->Complete(StripTrailingNewlines(prompt), 0, 4)) ==
         "yes";
}

HttpRewardModel::HttpRewardModel(std::shared_ptr<HttpClient> client)
    : client_(std::move(client)) {}

std::string HttpRewardModel::BuildPrompt(const Transcript& transcript,
                                         const GameConfig& config) {
  std::string private_info;
  for (int p = 0; p < config.num_players; ++p) {
    if (p > 0) private_info += "\n\n";
    private_info += "Player " + std::to_string(p) + " (" +
                    config.player_names.at(p) + "):\n" +
                    RenderPrivateInfo(config.scenario.private_info.at(p));
  }
  std::string prompt = std::string(
      Asset("reward_" + std::string(DomainName(config.domain_id)) + ".txt"));
  prompt = ReplaceAll(std::move(prompt), "{private_info}", private_info);
  prompt = ReplaceAll(std::move(prompt), "{transcript}", transcript.thread);
  return StripTrailingNewlines(prompt);
}

RewardJudgment HttpRewardModel::ParseAnswer(std::string_view answer,
                                            int num_players) {
  static const std::regex kUtility(
      R"(utility for player\s+(\d+)\s+is\s+([-+]?\d+(?:\.\d+)?(?:[eE][-+]?\d+)?))",
      std::regex::icase);
  static const std::regex kOutcome(R"(outcome:\s*(\w+))", std::regex::icase);
  RewardJudgment judgment;
  judgment.values.assign(num_players, 0.0);
  judgment.rationale = std::string(answer);
  std::vector<bool> seen(num_players, false);
  const std::string text(answer);
  // The answer may restate the few-shot example; the last line per player
  // is the one that counts.
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kUtility);
       it != std::sregex_iterator(); ++it) {
    const int player = std::stoi((*it)[1]);
    if (player < 0 || player >= num_players) continue;
    judgment.values[player] = ParseDouble((*it)[2].str());
    seen[player] = true;
  }
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kOutcome);
       it != std::sregex_iterator(); ++it) {
    try {
      judgment.outcome = ParseOutcomeTag(ToLower((*it)[1].str()));
    } catch (const Error&) {
      // Unknown tags leave the previous value.
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    judgment.values.assign(num_players, 0.0);
    judgment.outcome = OutcomeTag::kIncomplete;
    judgment.parse_failure = true;
  }
  return judgment;
}

RewardJudgment HttpRewardModel::Score(const Transcript& transcript,
                                      const GameConfig& config) {
  return ParseAnswer(client_->Complete(BuildPrompt(transcript, config), 0, 512),
                     config.num_players);
}

}  // namespace dialogue_games
