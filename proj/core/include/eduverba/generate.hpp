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

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace eduverba {

struct GenParams {
  double temperature = 0.1;
  double top_p = 0.75;
  int top_k = 50;
  bool send_top_k = true;  // some endpoints reject unknown sampling fields
  int max_retries = 3;     // total attempts per prompt
  std::string endpoint = "http://127.0.0.1:8089/v1/chat/completions";
  std::string model_name = "gpt-3.5-turbo";
  std::chrono::seconds timeout{60};
  std::size_t concurrency = 4;
  bool leak_filter = true;
  int num_clues = 3;

  void validate() const;
};

void to_json(nlohmann::json& j, const GenParams& p);
void from_json(const nlohmann::json& j, GenParams& p);

enum class ClueStatus { Valid, Empty, Malformed, Leaked };

std::string_view to_string(ClueStatus status) noexcept;
ClueStatus parse_clue_status(std::string_view s);

struct ClueSet {
  std::vector<std::string> clues;
  ClueStatus status = ClueStatus::Empty;
  std::string raw_response;
  int attempts = 0;
};

void to_json(nlohmann::json& j, const ClueSet& c);
void from_json(const nlohmann::json& j, ClueSet& c);

enum class ParseFailure { NoStructure, WrongCount };

struct ClueParse {
  std::vector<std::string> clues;
  std::optional<ParseFailure> error;

  bool ok() const { return !error.has_value(); }
};

/// Finds the first JSON object in `raw` carrying a "clues" array of strings,
/// ignoring surrounding prose or code fences. Exactly `expected` entries are
/// required; a present but short/long array is WrongCount, anything else
/// (including an empty array) is NoStructure.
ClueParse parse_clues(std::string_view raw, std::size_t expected = 3);

/// The canonical response payload: {"clues":[...]}.
std::string serialize_clues(const std::vector<std::string>& clues);

/// True when the clue gives the answer away: the whole keyword occurs as a
/// substring, a keyword word of four or more letters prefixes a clue word,
/// or a shorter keyword word equals a clue word (all case-insensitive).
bool leak_check(std::string_view clue, std::string_view keyword);

/// Classifies one model response against the keyword.
ClueSet classify_response(std::string raw, std::string_view keyword, const GenParams& params);

/// Chat-completions transport. Implementations throw EndpointUnreachable or
/// AuthFailure and must be callable from several threads.
class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual std::string complete(const std::string& prompt, const GenParams& params) = 0;
};

/// OpenAI-style HTTP client. The bearer token comes from EDUVERBA_API_KEY
/// unless passed explicitly.
class HttpChatClient final : public ChatClient {
 public:
  explicit HttpChatClient(std::optional<std::string> api_key = std::nullopt);
  std::string complete(const std::string& prompt, const GenParams& params) override;

  static nlohmann::json request_body(const std::string& prompt, const GenParams& params);

 private:
  std::string api_key_;
};

/// Issues the prompt, retrying with identical parameters until a Valid
/// ClueSet or `max_retries` attempts; the last failure is returned with its
/// raw response preserved.
ClueSet generate_clues(ChatClient& client, const std::string& prompt, std::string_view keyword,
                       const GenParams& params);

struct GenerationRequest {
  std::string prompt;
  std::string keyword;
};

/// Up to params.concurrency requests in flight; results in input order.
std::vector<ClueSet> generate_all(ChatClient& client, const std::vector<GenerationRequest>& requests,
                                  const GenParams& params);

}  // namespace eduverba
