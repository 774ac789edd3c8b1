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

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eduverba/ingest.hpp"

namespace eduverba {

enum class PopularityRule { AnyOf, AllOf };

struct ScreenConfig {
  std::int64_t min_views = 10'000;
  Importance required_importance = Importance::Top;
  PopularityRule popularity_rule = PopularityRule::AnyOf;
  std::size_t min_context_words = 30;
  std::size_t max_context_words = 1000;
  std::size_t max_keyword_words = 3;
  std::size_t min_keyword_chars = 3;
  std::size_t max_keyword_chars = 20;
  bool ascii_only = false;

  /// Throws InvalidConfig unless every threshold is positive and each
  /// min < max.
  void validate() const;
};

void to_json(nlohmann::json& j, const ScreenConfig& cfg);
void from_json(const nlohmann::json& j, ScreenConfig& cfg);

enum class RejectReason {
  LowPopularity,
  ContextTooShort,
  ContextTooLong,
  KeywordTooManyWords,
  KeywordTooShort,
  KeywordTooLong,
  KeywordNonAlphabetic,
  NoKeyword,
};

std::string_view to_string(RejectReason reason) noexcept;
RejectReason parse_reject_reason(std::string_view s);

struct ScreenDecision {
  bool accepted = false;
  std::optional<std::string> kept_keyword;
  std::vector<RejectReason> reasons;

  bool operator==(const ScreenDecision&) const = default;
};

void to_json(nlohmann::json& j, const ScreenDecision& d);
void from_json(const nlohmann::json& j, ScreenDecision& d);

struct KeywordCheck {
  bool pass = false;
  std::vector<RejectReason> reasons;
};

KeywordCheck keyword_ok(std::string_view keyword, const ScreenConfig& cfg);

/// Never throws: every violated rule is listed in `reasons`. The first
/// keyword (document order) passing all keyword rules is kept.
ScreenDecision screen_page(const PageRecord& page, const ScreenConfig& cfg);

}  // namespace eduverba
