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

#include "eduverba/generate.hpp"

#include <algorithm>

#include "eduverba/error.hpp"
#include "eduverba/metrics.hpp"
#include "eduverba/parallel.hpp"
#include "eduverba/text.hpp"

namespace eduverba {

void GenParams::validate() const {
  if (temperature < 0.0) throw Error(Errc::InvalidConfig, "temperature must be >= 0");
  if (!(top_p > 0.0 && top_p <= 1.0)) throw Error(Errc::InvalidConfig, "top_p must be in (0,1]");
  if (top_k <= 0) throw Error(Errc::InvalidConfig, "top_k must be positive");
  if (max_retries <= 0) throw Error(Errc::InvalidConfig, "max_retries must be positive");
  if (num_clues <= 0) throw Error(Errc::InvalidConfig, "num_clues must be positive");
  if (endpoint.empty()) throw Error(Errc::InvalidConfig, "endpoint is empty");
}

void to_json(nlohmann::json& j, const GenParams& p) {
  j = nlohmann::json{{"temperature", p.temperature},   {"top_p", p.top_p},
                     {"top_k", p.top_k},               {"send_top_k", p.send_top_k},
                     {"max_retries", p.max_retries},   {"endpoint", p.endpoint},
                     {"model_name", p.model_name},     {"timeout_s", p.timeout.count()},
                     {"concurrency", p.concurrency},   {"leak_filter", p.leak_filter},
                     {"num_clues", p.num_clues}};
}

void from_json(const nlohmann::json& j, GenParams& p) {
  p.temperature = j.value("temperature", p.temperature);
  p.top_p = j.value("top_p", p.top_p);
  p.top_k = j.value("top_k", p.top_k);
  p.send_top_k = j.value("send_top_k", p.send_top_k);
  p.max_retries = j.value("max_retries", p.max_retries);
  p.endpoint = j.value("endpoint", p.endpoint);
  p.model_name = j.value("model_name", p.model_name);
  p.timeout = std::chrono::seconds(j.value("timeout_s", p.timeout.count()));
  p.concurrency = j.value("concurrency", p.concurrency);
  p.leak_filter = j.value("leak_filter", p.leak_filter);
  p.num_clues = j.value("num_clues", p.num_clues);
}

std::string_view to_string(ClueStatus s) noexcept {
  switch (s) {
    case ClueStatus::Valid: return "Valid";
    case ClueStatus::Empty: return "Empty";
    case ClueStatus::Malformed: return "Malformed";
    case ClueStatus::Leaked: return "Leaked";
  }
  return "?";
}

ClueStatus parse_clue_status(std::string_view s) {
  for (auto st : {ClueStatus::Valid, ClueStatus::Empty, ClueStatus::Malformed, ClueStatus::Leaked}) {
    if (to_string(st) == s) return st;
  }
  throw Error(Errc::MalformedRecord, "unknown clue status '" + std::string(s) + "'");
}

void to_json(nlohmann::json& j, const ClueSet& c) {
  j = nlohmann::json{{"clues", c.clues},
                     {"status", to_string(c.status)},
                     {"raw_response", c.raw_response},
                     {"attempts", c.attempts}};
}

void from_json(const nlohmann::json& j, ClueSet& c) {
  c.clues = j.value("clues", std::vector<std::string>{});
  c.status = parse_clue_status(j.at("status").get<std::string>());
  c.raw_response = j.value("raw_response", "");
  c.attempts = j.value("attempts", 0);
}

namespace {

// Index one past the '}' matching the '{' at `open`, honoring JSON strings.
std::size_t matching_brace(std::string_view s, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

}  // namespace

ClueParse parse_clues(std::string_view raw, std::size_t expected) {
  for (std::size_t open = raw.find('{'); open != std::string_view::npos; open = raw.find('{', open + 1)) {
    const std::size_t close = matching_brace(raw, open);
    if (close == std::string_view::npos) continue;
    const auto j = nlohmann::json::parse(raw.substr(open, close - open), nullptr, false);
    if (j.is_discarded() || !j.is_object()) continue;
    const auto it = j.find("clues");
    if (it == j.end() || !it->is_array()) continue;
    if (!std::all_of(it->begin(), it->end(), [](const auto& v) { return v.is_string(); })) continue;

    ClueParse out;
    for (const auto& v : *it) out.clues.push_back(v.get<std::string>());
    if (out.clues.empty()) {
      out.error = ParseFailure::NoStructure;
    } else if (out.clues.size() != expected) {
      out.error = ParseFailure::WrongCount;
    }
    return out;
  }
  return ClueParse{{}, ParseFailure::NoStructure};
}

std::string serialize_clues(const std::vector<std::string>& clues) {
  return nlohmann::json{{"clues", clues}}.dump();
}

bool leak_check(std::string_view clue, std::string_view keyword) {
  const std::string clue_lower = text::lowercase(clue);
  const std::string keyword_lower = text::lowercase(text::normalize_space(keyword));
  if (!keyword_lower.empty() && clue_lower.find(keyword_lower) != std::string::npos) return true;

  const auto clue_words = metrics::tokenize(clue);
  for (std::string_view unit : text::split_whitespace(keyword_lower)) {
    for (const auto& word : metrics::tokenize(unit)) {
      const bool long_word = text::letter_count(word) >= 4;
      for (const auto& cw : clue_words) {
        if (long_word ? cw.starts_with(word) : cw == word) return true;
      }
    }
  }
  return false;
}

ClueSet classify_response(std::string raw, std::string_view keyword, const GenParams& params) {
  ClueSet set;
  const auto parsed = parse_clues(raw, static_cast<std::size_t>(params.num_clues));
  if (!parsed.ok()) {
    const bool blank = text::trim(raw).empty();
    set.status = blank && *parsed.error == ParseFailure::NoStructure ? ClueStatus::Empty : ClueStatus::Malformed;
    if (set.status == ClueStatus::Malformed) set.clues = parsed.clues;
  } else if (std::any_of(parsed.clues.begin(), parsed.clues.end(),
                         [](const std::string& c) { return text::trim(c).empty(); })) {
    set.status = ClueStatus::Malformed;
    set.clues = parsed.clues;
  } else {
    set.clues = parsed.clues;
    const bool leaked = params.leak_filter && std::any_of(set.clues.begin(), set.clues.end(), [&](const auto& c) {
                          return leak_check(c, keyword);
                        });
    set.status = leaked ? ClueStatus::Leaked : ClueStatus::Valid;
  }
  set.raw_response = std::move(raw);
  return set;
}

ClueSet generate_clues(ChatClient& client, const std::string& prompt, std::string_view keyword,
                       const GenParams& params) {
  params.validate();
  ClueSet last;
  for (int attempt = 1; attempt <= params.max_retries; ++attempt) {
    last = classify_response(client.complete(prompt, params), keyword, params);
    last.attempts = attempt;
    if (last.status == ClueStatus::Valid) break;
  }
  return last;
}

std::vector<ClueSet> generate_all(ChatClient& client, const std::vector<GenerationRequest>& requests,
                                  const GenParams& params) {
  return parallel_map(requests.size(), params.concurrency, [&](std::size_t i) {
    return generate_clues(client, requests[i].prompt, requests[i].keyword, params);
  });
}

}  // namespace eduverba
