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

#include "eduverba/mock_llm.hpp"

#include <httplib.h>

#include <atomic>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "eduverba/error.hpp"
#include "eduverba/generate.hpp"
#include "eduverba/metrics.hpp"
#include "eduverba/text.hpp"

namespace eduverba {
namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 14695981039346656037ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string passage_of(const std::string& prompt) {
  const std::size_t open = prompt.find("\"\"\"");
  if (open != std::string::npos) {
    const std::size_t close = prompt.find("\"\"\"", open + 3);
    if (close != std::string::npos) return std::string(text::trim(std::string_view(prompt).substr(open + 3, close - open - 3)));
  }
  return prompt;
}

std::optional<std::string> answer_of(const std::string& prompt) {
  static constexpr std::string_view kMarker = "Answer word:";
  const std::size_t at = prompt.find(kMarker);
  if (at == std::string::npos) return std::nullopt;
  std::size_t end = prompt.find('\n', at);
  if (end == std::string::npos) end = prompt.size();
  std::string answer(text::trim(std::string_view(prompt).substr(at + kMarker.size(), end - at - kMarker.size())));
  if (answer.empty()) return std::nullopt;
  return answer;
}

std::string masked_clue(const std::string& sentence, const std::optional<std::string>& answer, std::size_t index) {
  std::string clue;
  std::size_t kept = 0;
  for (std::string_view word : text::split_whitespace(sentence)) {
    if (answer && leak_check(word, *answer)) continue;
    if (kept == 12) break;
    if (!clue.empty()) clue.push_back(' ');
    clue.append(word);
    ++kept;
  }
  while (!clue.empty() && (clue.back() == '.' || clue.back() == ',' || clue.back() == ';' || clue.back() == ':'))
    clue.pop_back();
  if (kept < 3 || !answer || leak_check(clue, *answer))
    clue = "Subject number " + std::to_string(index + 1) + " described in the reading";
  return clue;
}

std::vector<std::string> sentence_clues(const std::string& prompt, const std::optional<std::string>& answer) {
  const auto sentences = metrics::split_sentences(passage_of(prompt));
  std::vector<std::string> clues;
  for (std::size_t i = 0; i < 3; ++i) {
    const std::string clue = i < sentences.size() ? masked_clue(sentences[i], answer, i)
                                                  : "Subject number " + std::to_string(i + 1) + " described in the reading";
    clues.push_back(std::find(clues.begin(), clues.end(), clue) == clues.end()
                        ? clue
                        : "Subject number " + std::to_string(i + 1) + " described in the reading");
  }
  return clues;
}

}  // namespace

MockFault mock_fault_for(const MockLlmConfig& cfg, const std::string& prompt, std::uint64_t occurrence) {
  const std::uint64_t h = mix(fnv1a(prompt, mix(cfg.seed)) ^ mix(occurrence + 0x51ed27));
  const double u = static_cast<double>(h >> 11) * 0x1.0p-53;
  if (u < cfg.malformed_rate) return MockFault::Malformed;
  if (u < cfg.malformed_rate + cfg.leak_rate) return MockFault::Leak;
  return MockFault::None;
}

std::string mock_reply(const std::string& prompt, MockFault fault, std::uint64_t variant) {
  const auto answer = answer_of(prompt);
  auto clues = sentence_clues(prompt, answer);
  switch (fault) {
    case MockFault::None:
      return nlohmann::json{{"clues", clues}}.dump();
    case MockFault::Leak: {
      const auto sentences = metrics::split_sentences(passage_of(prompt));
      clues[0] = answer ? "Known as " + *answer + " in the passage"
                        : (sentences.empty() ? std::string("The passage itself") : sentences.front());
      return "Here are the clues:\n" + nlohmann::json{{"clues", clues}}.dump();
    }
    case MockFault::Malformed:
      switch (variant % 4) {
        case 0: return "Sure! A good clue would be: " + clues[0] + ". Let me know if you want more.";
        case 1: return nlohmann::json{{"clues", {clues[0]}}}.dump();
        case 2: return R"({"clues": [")" + clues[0] + R"(", ")" + clues[1];
        default: return "";
      }
  }
  return "";
}

struct MockLlmServer::Impl {
  MockLlmConfig cfg;
  httplib::Server server;
  std::thread thread;
  int port = -1;

  mutable std::mutex mu;
  std::unordered_map<std::string, std::uint64_t> seen;
  std::size_t script_pos = 0;
  Counters counters;
  nlohmann::json last_request;

  void handle(const httplib::Request& req, httplib::Response& res) {
    if (cfg.api_key && req.get_header_value("Authorization") != "Bearer " + *cfg.api_key) {
      res.status = 401;
      res.set_content(R"({"error":{"message":"invalid api key"}})", "application/json");
      return;
    }
    auto body = nlohmann::json::parse(req.body, nullptr, false);
    if (body.is_discarded() || !body.contains("messages") || body["messages"].empty()) {
      res.status = 400;
      res.set_content(R"({"error":{"message":"bad request"}})", "application/json");
      return;
    }
    std::string prompt = body["messages"].back().value("content", "");

    std::string content;
    std::size_t request_no = 0;
    {
      std::lock_guard lock(mu);
      request_no = ++counters.requests;
      last_request = body;
      if (cfg.force_status != 0) {
        res.status = cfg.force_status;
        res.set_content(R"({"error":{"message":"forced failure"}})", "application/json");
        return;
      }
      if (script_pos < cfg.script.size()) {
        content = cfg.script[script_pos++];
        ++counters.scripted;
      } else {
        const std::uint64_t occurrence = seen[prompt]++;
        const MockFault fault = mock_fault_for(cfg, prompt, occurrence);
        content = mock_reply(prompt, fault, mix(fnv1a(prompt) + occurrence));
        if (fault == MockFault::None) ++counters.valid;
        if (fault == MockFault::Malformed) ++counters.malformed;
        if (fault == MockFault::Leak) ++counters.leaked;
      }
    }
    const nlohmann::json reply = {
        {"id", "mock-" + std::to_string(request_no)},
        {"object", "chat.completion"},
        {"model", body.value("model", "mock")},
        {"choices", nlohmann::json::array({{{"index", 0},
                                            {"message", {{"role", "assistant"}, {"content", content}}},
                                            {"finish_reason", "stop"}}})}};
    res.set_content(reply.dump(), "application/json");
  }
};

MockLlmServer::MockLlmServer(MockLlmConfig cfg) : impl_(std::make_unique<Impl>()) {
  impl_->cfg = std::move(cfg);
  impl_->server.Post("/v1/chat/completions",
                     [this](const httplib::Request& req, httplib::Response& res) { impl_->handle(req, res); });
  impl_->server.Post("/chat/completions",
                     [this](const httplib::Request& req, httplib::Response& res) { impl_->handle(req, res); });
}

MockLlmServer::~MockLlmServer() { stop(); }

int MockLlmServer::start(const std::string& host, int port) {
  impl_->port = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (impl_->port < 0) throw Error(Errc::PortInUse, host + ":" + std::to_string(port));
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return impl_->port;
}

void MockLlmServer::run(const std::string& host, int port) {
  if (!impl_->server.bind_to_port(host, port)) throw Error(Errc::PortInUse, host + ":" + std::to_string(port));
  impl_->port = port;
  impl_->server.listen_after_bind();
}

void MockLlmServer::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int MockLlmServer::port() const { return impl_->port; }

std::string MockLlmServer::endpoint() const {
  return "http://127.0.0.1:" + std::to_string(impl_->port) + "/v1/chat/completions";
}

MockLlmServer::Counters MockLlmServer::counters() const {
  std::lock_guard lock(impl_->mu);
  return impl_->counters;
}

nlohmann::json MockLlmServer::last_request() const {
  std::lock_guard lock(impl_->mu);
  return impl_->last_request;
}

}  // namespace eduverba
