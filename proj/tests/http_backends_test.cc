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

#include <cstdlib>
#include <functional>
#include <mutex>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "dialogue_games/assets.h"
#include "dialogue_games/domains.h"
#include "dialogue_games/errors.h"

namespace dialogue_games {
namespace {

using json = nlohmann::json;

// A local completion endpoint whose replies are scripted per test.
class MockServer {
 public:
  using Handler = std::function<void(const httplib::Request&,
                                     httplib::Response&)>;

  explicit MockServer(Handler handler) : handler_(std::move(handler)) {
    server_.Post("/generate",
                 [this](const httplib::Request& req, httplib::Response& res) {
                   {
                     std::lock_guard<std::mutex> lock(mu_);
                     requests_.push_back(req.body);
                     auth_.push_back(req.get_header_value("Authorization"));
                   }
                   handler_(req, res);
                 });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~MockServer() {
    server_.stop();
    thread_.join();
  }

  HttpConfig Config() const {
    HttpConfig c;
    c.endpoint = "http://127.0.0.1:" + std::to_string(port_) + "/generate";
    c.initial_backoff = std::chrono::milliseconds(1);
    c.timeout = std::chrono::milliseconds(5000);
    return c;
  }
  std::vector<std::string> requests() {
    std::lock_guard<std::mutex> lock(mu_);
    return requests_;
  }
  std::vector<std::string> auth() {
    std::lock_guard<std::mutex> lock(mu_);
    return auth_;
  }

 private:
  Handler handler_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  std::mutex mu_;
  std::vector<std::string> requests_;
  std::vector<std::string> auth_;
};

void Reply(httplib::Response& res, const std::string& text) {
  res.set_content(json{{"text", text}}.dump(), "application/json");
}

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIoError;
}

TEST(HttpClientTest, SendsWireFormatAndBearerToken) {
  MockServer server([](const auto&, auto& res) { Reply(res, " hi there \n"); });
  HttpConfig config = server.Config();
  config.token = "secret";
  auto client = std::make_shared<HttpClient>(config);
  HttpGenerator gen(client);
  GenerationRequest r;
  r.prompt = "Say hi";
  r.seed = 7;
  r.max_tokens = 32;
  EXPECT_EQ(gen.Generate(r), "hi there");
  const json sent = json::parse(server.requests().at(0));
  EXPECT_EQ(sent, (json{{"prompt", "Say hi"}, {"seed", 7}, {"max_tokens", 32}}));
  EXPECT_EQ(server.auth().at(0), "Bearer secret");
}

TEST(HttpClientTest, RetriesServerErrors) {
  int calls = 0;
  MockServer server([&](const auto&, auto& res) {
    if (++calls < 3) {
      res.status = 503;
      return;
    }
    Reply(res, "ok");
  });
  HttpClient client(server.Config());
  EXPECT_EQ(client.Complete("p", 0, 8), "ok");
  EXPECT_EQ(client.requests_sent(), 3);
}

TEST(HttpClientTest, GivesUpWithBackendFailure) {
  MockServer server([](const auto&, auto& res) { res.status = 500; });
  HttpClient client(server.Config());
  EXPECT_EQ(CodeOf([&] { client.Complete("p", 0, 8); }),
            ErrorCode::kBackendFailure);
  EXPECT_EQ(client.requests_sent(), 3);
}

TEST(HttpClientTest, ClientErrorsAreNotRetried) {
  MockServer server([](const auto&, auto& res) { res.status = 401; });
  HttpClient client(server.Config());
  EXPECT_EQ(CodeOf([&] { client.Complete("p", 0, 8); }),
            ErrorCode::kBackendFailure);
  EXPECT_EQ(client.requests_sent(), 1);
}

TEST(HttpClientTest, MalformedResponsesFail) {
  MockServer server([](const auto&, auto& res) {
    res.set_content("{\"nope\": 1}", "application/json");
  });
  HttpClient client(server.Config());
  EXPECT_EQ(CodeOf([&] { client.Complete("p", 0, 8); }),
            ErrorCode::kBackendFailure);
}

TEST(HttpClientTest, UnreachableEndpointFails) {
  HttpConfig config;
  config.endpoint = "http://127.0.0.1:1/generate";
  config.max_attempts = 2;
  config.initial_backoff = std::chrono::milliseconds(1);
  HttpClient client(config);
  EXPECT_EQ(CodeOf([&] { client.Complete("p", 0, 8); }),
            ErrorCode::kBackendFailure);
}

TEST(HttpClientTest, BoundsRequestsInFlight) {
  std::mutex mu;
  int active = 0, peak = 0;
  MockServer server([&](const auto&, auto& res) {
    {
      std::lock_guard<std::mutex> lock(mu);
      peak = std::max(peak, ++active);
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(30));
    {
      std::lock_guard<std::mutex> lock(mu);
      --active;
    }
    Reply(res, "ok");
  });
  HttpConfig config = server.Config();
  config.max_in_flight = 2;
  HttpClient client(config);
  std::vector<std::thread> threads;
  for (int i = 0; i < 6; ++i) {
    threads.emplace_back([&] { client.Complete("p", 0, 8); });
  }
  for (auto& t : threads) t.join();
  EXPECT_LE(peak, 2);
  EXPECT_EQ(client.requests_sent(), 6);
}

TEST(HttpConfigTest, EnvironmentAndJson) {
  setenv("GTLLM_ENDPOINT", "http://localhost:9/x", 1);
  setenv("GTLLM_TOKEN", "tok", 1);
  HttpConfig env = HttpConfig::FromEnvironment();
  EXPECT_EQ(env.endpoint, "http://localhost:9/x");
  EXPECT_EQ(env.token, "tok");
  HttpConfig j = HttpConfig::FromJson(
      {{"endpoint", "http://h:1/y"}, {"max_attempts", 5}, {"timeout_ms", 10}});
  EXPECT_EQ(j.endpoint, "http://h:1/y");
  EXPECT_EQ(j.token, "tok");
  EXPECT_EQ(j.max_attempts, 5);
  EXPECT_EQ(j.timeout, std::chrono::milliseconds(10));
  unsetenv("GTLLM_ENDPOINT");
  unsetenv("GTLLM_TOKEN");
  EXPECT_EQ(CodeOf([] { HttpClient c(HttpConfig{}); }),
            ErrorCode::kConfigInvalid);
  HttpConfig tls;
  tls.endpoint = "https://example.com/generate";
  EXPECT_EQ(CodeOf([&] { HttpClient c(tls); }), ErrorCode::kConfigInvalid);
  EXPECT_EQ(CodeOf([] { HttpConfig::FromJson({{"max_attempts", "x"}}); }),
            ErrorCode::kConfigInvalid);
}

TEST(HttpClassifierTest, DebateEthosExample) {
  MockServer server([](const httplib::Request& req, auto& res) {
    const std::string prompt = json::parse(req.body).at("prompt");
    const std::string tail = prompt.substr(prompt.rfind("Message:"));
    Reply(res, tail.find("dentist") != std::string::npos ? " Ethos." : "??");
  });
  HttpClassifier classifier(std::make_shared<HttpClient>(server.Config()),
                            std::string(Asset("classifier_debate.txt")));
  const std::vector<std::string> labels = {"logos", "ethos", "pathos"};
  const std::string message =
      "I am a dentist and my advice is that Colgate is the best toothpaste "
      "for your teeth.";
  EXPECT_EQ(classifier.Classify(message, labels),
            (std::vector<double>{0, 1, 0}));
  const std::string prompt =
      json::parse(server.requests().at(0)).at("prompt");
  EXPECT_EQ(prompt.substr(prompt.size() - 7), "Answer:");
  EXPECT_NE(prompt.find("Message: " + message), std::string::npos);
  const auto uniform = classifier.Classify("no idea", labels);
  for (double p : uniform) EXPECT_DOUBLE_EQ(p, 1.0 / 3);
}

TEST(HttpClassifierTest, ParseAnswerUsesFirstWord) {
  const std::vector<std::string> labels = {"calm", "Assertive"};
  EXPECT_EQ(HttpClassifier::ParseAnswer("assertive, clearly", labels),
            (std::vector<double>{0, 1}));
  EXPECT_EQ(HttpClassifier::ParseAnswer("\n CALM", labels),
            (std::vector<double>{1, 0}));
  EXPECT_EQ(HttpClassifier::ParseAnswer("I think calm", labels),
            (std::vector<double>{0.5, 0.5}));
}

TEST(HttpTerminatorTest, YesMeansTerminal) {
  std::string answer = "Yes";
  MockServer server([&](const auto&, auto& res) { Reply(res, answer); });
  HttpTerminator judge(std::make_shared<HttpClient>(server.Config()));
  const GameConfig config = GenerateGameConfig(DomainId::kFruit, 0);
  Transcript t;
  t.thread = "the thread";
  EXPECT_TRUE(judge.IsTerminal(t, config));
  answer = "No.";
  EXPECT_FALSE(judge.IsTerminal(t, config));
  const std::string prompt = json::parse(server.requests().at(0)).at("prompt");
  EXPECT_NE(prompt.find("the thread"), std::string::npos);
}

TEST(HttpRewardModelTest, ParsesUtilityLines) {
  MockServer server([](const auto&, auto& res) {
    Reply(res,
          "Player Alina: Receives 1 banana Gives 2 kiwis\nOutcome: valid\n"
          "Utility for player 0 is 3.0\nUtility for player 1 is -3.0\n");
  });
  HttpRewardModel model(std::make_shared<HttpClient>(server.Config()));
  const GameConfig config = GenerateGameConfig(DomainId::kFruit, 2);
  Transcript t;
  t.thread = "THREAD";
  const RewardJudgment j = model.Score(t, config);
  EXPECT_EQ(j.values, (std::vector<double>{3.0, -3.0}));
  EXPECT_EQ(j.outcome, OutcomeTag::kValid);
  EXPECT_FALSE(j.parse_failure);
  const std::string prompt = json::parse(server.requests().at(0)).at("prompt");
  EXPECT_NE(prompt.find("THREAD"), std::string::npos);
  EXPECT_NE(prompt.find("Fruit Valuations:"), std::string::npos);
  EXPECT_EQ(prompt.find("{transcript}"), std::string::npos);
}

TEST(HttpRewardModelTest, MissingUtilityIsParseFailure) {
  const RewardJudgment j =
      HttpRewardModel::ParseAnswer("Utility for player 0 is 2", 2);
  EXPECT_TRUE(j.parse_failure);
  EXPECT_EQ(j.values, (std::vector<double>{0.0, 0.0}));
  const RewardJudgment last = HttpRewardModel::ParseAnswer(
      "Utility for player 0 is 1\nUtility for player 1 is 1\n"
      "Outcome: rejected\nUtility for player 0 is 0.0\n"
      "Utility for player 1 is 0.0",
      2);
  EXPECT_EQ(last.values, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(last.outcome, OutcomeTag::kRejected);
  EXPECT_FALSE(last.parse_failure);
}

}  // namespace
}  // namespace dialogue_games
