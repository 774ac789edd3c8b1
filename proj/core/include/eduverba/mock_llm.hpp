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

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace eduverba {

/// Local chat-completions stand-in with scripted replies and fault
/// injection. Faults are a deterministic function of (seed, prompt, how many
/// times that prompt has been seen), so runs replay identically regardless
/// of request interleaving.
struct MockLlmConfig {
  double malformed_rate = 0.0;
  double leak_rate = 0.0;
  std::uint64_t seed = 0;
  /// Replies served verbatim, in order, before falling back to synthesis.
  std::vector<std::string> script;
  /// When set, requests must carry "Authorization: Bearer <key>".
  std::optional<std::string> api_key;
  /// Non-zero forces every request to fail with this HTTP status.
  int force_status = 0;
};

enum class MockFault { None, Malformed, Leak };

MockFault mock_fault_for(const MockLlmConfig& cfg, const std::string& prompt, std::uint64_t occurrence);

/// Synthesized assistant text for a prompt: well-formed leak-free clues for
/// MockFault::None, clues quoting the answer for Leak, and one of several
/// broken shapes for Malformed (selected by `variant`).
std::string mock_reply(const std::string& prompt, MockFault fault, std::uint64_t variant = 0);

class MockLlmServer {
 public:
  explicit MockLlmServer(MockLlmConfig cfg);
  ~MockLlmServer();
  MockLlmServer(const MockLlmServer&) = delete;
  MockLlmServer& operator=(const MockLlmServer&) = delete;

  /// Binds (port 0 picks a free port) and serves on a background thread.
  int start(const std::string& host = "127.0.0.1", int port = 0);
  /// Blocks serving until stop() is called from elsewhere.
  void run(const std::string& host, int port);
  void stop();

  int port() const;
  std::string endpoint() const;

  struct Counters {
    std::size_t requests = 0;
    std::size_t valid = 0;
    std::size_t malformed = 0;
    std::size_t leaked = 0;
    std::size_t scripted = 0;
  };
  Counters counters() const;
  nlohmann::json last_request() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace eduverba
