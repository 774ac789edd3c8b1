// Copyright 2026 The EduVerba Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <atomic>
#include <mutex>

#include "eduverba/error.hpp"
#include "eduverba/generate.hpp"
#include "eduverba/mock_llm.hpp"
#include "eduverba/prompt.hpp"

namespace eduverba {
namespace {

/// Replays canned replies in order; the last one repeats.
class ScriptedClient final : public ChatClient {
 public:
  explicit ScriptedClient(std::vector<std::string> replies) : replies_(std::move(replies)) {}
  std::string complete(const std::string&, const GenParams&) override {
    std::lock_guard lock(mu_);
    const auto i = std::min(calls_++, replies_.size() - 1);
    return replies_[i];
  }
  std::size_t calls() const { return calls_; }

 private:
  std::vector<std::string> replies_;
  std::size_t calls_ = 0;
  std::mutex mu_;
};

const std::string kThree = R"({"clues": ["Large mammal of the Amazon", "Has a short trunk", "Grazes near rivers"]})";

TEST(ParseClues, ExactlyThree) {
  const auto p = parse_clues(kThree);
  ASSERT_TRUE(p.ok());
  EXPECT_EQ(p.clues, (std::vector<std::string>{"Large mammal of the Amazon", "Has a short trunk", "Grazes near rivers"}));
}

TEST(ParseClues, ProseWrapped) {
  const auto p = parse_clues("Here you go: " + kThree + " Hope it helps!");
  ASSERT_TRUE(p.ok());
  EXPECT_EQ(p.clues.size(), 3u);
}

TEST(ParseClues, CodeFenceAndEarlierNonClueObject) {
  const auto p = parse_clues("Notes {\"a\": 1} then:\n```json\n" + kThree + "\n```");
  ASSERT_TRUE(p.ok());
  EXPECT_EQ(p.clues[1], "Has a short trunk");
}

TEST(ParseClues, FailureKinds) {
  EXPECT_EQ(parse_clues(R"({"clues": ["only one"]})").error, ParseFailure::WrongCount);
  EXPECT_EQ(parse_clues(R"({"clues": ["a", "b"]})").error, ParseFailure::WrongCount);
  EXPECT_EQ(parse_clues(R"({"clues": ["a", "b", "c", "d"]})").error, ParseFailure::WrongCount);
  EXPECT_EQ(parse_clues(R"({"clues": []})").error, ParseFailure::NoStructure);
  EXPECT_EQ(parse_clues("no structure at all").error, ParseFailure::NoStructure);
  EXPECT_EQ(parse_clues(R"({"clues": ["a", "b")").error, ParseFailure::NoStructure);
  EXPECT_EQ(parse_clues("").error, ParseFailure::NoStructure);
}

TEST(ParseClues, SerializeRoundTrip) {
  const std::vector<std::string> clues = {"Quote \" inside", "Brace { and }", "Unicode caf\xC3\xA9"};
  EXPECT_EQ(parse_clues(serialize_clues(clues)).clues, clues);
}

TEST(LeakCheck, Examples) {
  EXPECT_FALSE(leak_check("Automated phone call", "Robocall"));
  EXPECT_TRUE(leak_check("One of the four recognized species in the tapir family", "South American tapir"));
  EXPECT_TRUE(leak_check("A robocaller's tool", "Robocall"));
}

TEST(LeakCheck, RuleDetails) {
  EXPECT_TRUE(leak_check("Famous TAPIRS of Brazil", "South American tapir"));
  EXPECT_TRUE(leak_check("the robocallcenter", "Robocall"));  // whole keyword as substring
  EXPECT_FALSE(leak_check("Oxygen tank", "Ox Bow"));          // short word needs an exact match
  EXPECT_TRUE(leak_check("An ox pulls it", "Ox Bow"));
}

TEST(Classify, Statuses) {
  const GenParams params;
  EXPECT_EQ(classify_response(kThree, "Amazon", params).status, ClueStatus::Leaked);
  EXPECT_EQ(classify_response(kThree, "Capybara", params).status, ClueStatus::Valid);
  EXPECT_EQ(classify_response("garbage", "Capybara", params).status, ClueStatus::Malformed);
  EXPECT_EQ(classify_response("", "Capybara", params).status, ClueStatus::Empty);
  EXPECT_EQ(classify_response(R"({"clues": ["a", "", "c"]})", "Capybara", params).status, ClueStatus::Malformed);
  GenParams lenient;
  lenient.leak_filter = false;
  EXPECT_EQ(classify_response(kThree, "Tapir", lenient).status, ClueStatus::Valid);
}

TEST(GenerateClues, HappyPathOneAttempt) {
  ScriptedClient client({kThree});
  const auto set = generate_clues(client, "prompt", "Capybara", {});
  EXPECT_EQ(set.status, ClueStatus::Valid);
  EXPECT_EQ(set.attempts, 1);
  EXPECT_EQ(set.raw_response, kThree);
}

TEST(GenerateClues, MalformedExhaustsRetries) {
  ScriptedClient client({"I cannot produce JSON today."});
  GenParams params;
  params.max_retries = 4;
  const auto set = generate_clues(client, "prompt", "Capybara", params);
  EXPECT_EQ(set.status, ClueStatus::Malformed);
  EXPECT_EQ(set.attempts, 4);
  EXPECT_EQ(client.calls(), 4u);
  EXPECT_EQ(set.raw_response, "I cannot produce JSON today.");
}

TEST(GenerateClues, LeakedTapirClue) {
  const std::string leaked =
      R"({"clues": ["One of the four recognized species in the tapir family", "Lives in South America", "Herbivore"]})";
  ScriptedClient client({leaked});
  const auto set = generate_clues(client, "prompt", "South American tapir", {});
  EXPECT_EQ(set.status, ClueStatus::Leaked);
  EXPECT_EQ(set.attempts, 3);
}

TEST(GenerateClues, RecoversOnRetry) {
  ScriptedClient client({"oops", R"({"clues": ["x"]})", kThree});
  const auto set = generate_clues(client, "prompt", "Capybara", {});
  EXPECT_EQ(set.status, ClueStatus::Valid);
  EXPECT_EQ(set.attempts, 3);
}

TEST(GenerateAll, InputOrder) {
  ScriptedClient client({kThree});
  std::vector<GenerationRequest> reqs(9, {"p", "Capybara"});
  reqs[4].keyword = "Amazon";
  GenParams params;
  params.concurrency = 3;
  params.max_retries = 1;
  const auto out = generate_all(client, reqs, params);
  ASSERT_EQ(out.size(), 9u);
  for (std::size_t i = 0; i < out.size(); ++i)
    EXPECT_EQ(out[i].status, i == 4 ? ClueStatus::Leaked : ClueStatus::Valid) << i;
}

TEST(GenParams, DefaultsAndValidation) {
  GenParams p;
  EXPECT_DOUBLE_EQ(p.temperature, 0.1);
  EXPECT_DOUBLE_EQ(p.top_p, 0.75);
  EXPECT_EQ(p.top_k, 50);
  EXPECT_EQ(p.max_retries, 3);
  EXPECT_NO_THROW(p.validate());
  p.top_p = 0;
  EXPECT_THROW(p.validate(), Error);
  GenParams q;
  q.temperature = -1;
  EXPECT_THROW(q.validate(), Error);
  const nlohmann::json j = GenParams{};
  EXPECT_EQ(nlohmann::json(j.get<GenParams>()), j);
}

TEST(RequestBody, CarriesSamplingFields) {
  GenParams p;
  const auto body = HttpChatClient::request_body("hello", p);
  EXPECT_EQ(body["model"], p.model_name);
  EXPECT_EQ(body["messages"][0]["content"], "hello");
  EXPECT_EQ(body["top_k"], 50);
  p.send_top_k = false;
  EXPECT_FALSE(HttpChatClient::request_body("hello", p).contains("top_k"));
}

std::string tapir_prompt() {
  return render_prompt(PromptTemplate::default_template(),
                       "The South American tapir is a large herbivore. It lives in the Amazon rainforest. "
                       "Its trunk is short and flexible. Jaguars hunt it.",
                       "South American tapir", "Science")
      .text;
}

TEST(MockLlm, ValidRepliesAreLeakFree) {
  const auto reply = mock_reply(tapir_prompt(), MockFault::None);
  const auto set = classify_response(reply, "South American tapir", {});
  EXPECT_EQ(set.status, ClueStatus::Valid) << reply;
  const auto leak = classify_response(mock_reply(tapir_prompt(), MockFault::Leak), "South American tapir", {});
  EXPECT_EQ(leak.status, ClueStatus::Leaked);
  for (std::uint64_t v = 0; v < 4; ++v) {
    const auto bad = classify_response(mock_reply(tapir_prompt(), MockFault::Malformed, v), "South American tapir", {});
    EXPECT_NE(bad.status, ClueStatus::Valid) << v;
  }
}

TEST(MockLlm, FaultRatesAreApproximatelyHonoured) {
  MockLlmConfig cfg;
  cfg.malformed_rate = 0.2;
  cfg.leak_rate = 0.1;
  cfg.seed = 4;
  std::size_t malformed = 0, leak = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const auto f = mock_fault_for(cfg, "prompt " + std::to_string(i), 0);
    malformed += f == MockFault::Malformed;
    leak += f == MockFault::Leak;
  }
  EXPECT_NEAR(static_cast<double>(malformed) / n, 0.2, 0.015);
  EXPECT_NEAR(static_cast<double>(leak) / n, 0.1, 0.015);
  EXPECT_EQ(mock_fault_for(cfg, "same", 3), mock_fault_for(cfg, "same", 3));
}

TEST(HttpChatClient, AgainstMockServer) {
  MockLlmConfig cfg;
  cfg.script = {kThree};
  MockLlmServer server(cfg);
  server.start();
  GenParams params;
  params.endpoint = server.endpoint();
  HttpChatClient client(std::string("secret"));
  const auto set = generate_clues(client, tapir_prompt(), "Capybara", params);
  EXPECT_EQ(set.status, ClueStatus::Valid);
  EXPECT_EQ(set.raw_response, kThree);
  EXPECT_EQ(server.last_request()["top_p"], 0.75);
  // After the script runs out the server synthesizes replies.
  EXPECT_EQ(generate_clues(client, tapir_prompt(), "South American tapir", params).status, ClueStatus::Valid);
  EXPECT_EQ(server.counters().scripted, 1u);
}

TEST(HttpChatClient, AuthFailureIsDistinct) {
  MockLlmConfig cfg;
  cfg.api_key = "right";
  MockLlmServer server(cfg);
  server.start();
  GenParams params;
  params.endpoint = server.endpoint();
  HttpChatClient client(std::string("wrong"));
  try {
    generate_clues(client, "p", "Capybara", params);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::AuthFailure);
  }
}

TEST(HttpChatClient, ServerErrorsBecomeUnreachable) {
  MockLlmConfig cfg;
  cfg.force_status = 500;
  MockLlmServer server(cfg);
  server.start();
  GenParams params;
  params.endpoint = server.endpoint();
  params.max_retries = 2;
  HttpChatClient client(std::string("k"));
  try {
    client.complete("p", params);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EndpointUnreachable);
  }
  EXPECT_EQ(server.counters().requests, 2u);
}

TEST(HttpChatClient, NothingListening) {
  GenParams params;
  params.endpoint = "http://127.0.0.1:1/v1/chat/completions";
  params.max_retries = 1;
  HttpChatClient client(std::string("k"));
  EXPECT_THROW(client.complete("p", params), Error);
}

}  // namespace
}  // namespace eduverba
