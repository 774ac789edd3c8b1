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

#include "eduverba/screen.hpp"

#include <algorithm>

#include "eduverba/text.hpp"

namespace eduverba {

void ScreenConfig::validate() const {
  if (min_views <= 0 || min_context_words == 0 || max_context_words == 0 || max_keyword_words == 0 ||
      min_keyword_chars == 0 || max_keyword_chars == 0)
    throw Error(Errc::InvalidConfig, "screen thresholds must be positive");
  if (min_context_words >= max_context_words) throw Error(Errc::InvalidConfig, "min_context_words >= max_context_words");
  if (min_keyword_chars >= max_keyword_chars) throw Error(Errc::InvalidConfig, "min_keyword_chars >= max_keyword_chars");
}

void to_json(nlohmann::json& j, const ScreenConfig& c) {
  j = nlohmann::json{{"min_views", c.min_views},
                     {"required_importance", to_string(c.required_importance)},
                     {"popularity_rule", c.popularity_rule == PopularityRule::AnyOf ? "any" : "all"},
                     {"min_context_words", c.min_context_words},
                     {"max_context_words", c.max_context_words},
                     {"max_keyword_words", c.max_keyword_words},
                     {"min_keyword_chars", c.min_keyword_chars},
                     {"max_keyword_chars", c.max_keyword_chars},
                     {"ascii_only", c.ascii_only}};
}

void from_json(const nlohmann::json& j, ScreenConfig& c) {
  c.min_views = j.value("min_views", c.min_views);
  if (j.contains("required_importance")) c.required_importance = parse_importance(j["required_importance"].get<std::string>());
  if (j.contains("popularity_rule")) {
    const auto rule = j["popularity_rule"].get<std::string>();
    if (rule != "any" && rule != "all") throw Error(Errc::InvalidConfig, "popularity_rule must be 'any' or 'all'");
    c.popularity_rule = rule == "any" ? PopularityRule::AnyOf : PopularityRule::AllOf;
  }
  c.min_context_words = j.value("min_context_words", c.min_context_words);
  c.max_context_words = j.value("max_context_words", c.max_context_words);
  c.max_keyword_words = j.value("max_keyword_words", c.max_keyword_words);
  c.min_keyword_chars = j.value("min_keyword_chars", c.min_keyword_chars);
  c.max_keyword_chars = j.value("max_keyword_chars", c.max_keyword_chars);
  c.ascii_only = j.value("ascii_only", c.ascii_only);
}

std::string_view to_string(RejectReason r) noexcept {
  switch (r) {
    case RejectReason::LowPopularity: return "LowPopularity";
    case RejectReason::ContextTooShort: return "ContextTooShort";
    case RejectReason::ContextTooLong: return "ContextTooLong";
    case RejectReason::KeywordTooManyWords: return "KeywordTooManyWords";
    case RejectReason::KeywordTooShort: return "KeywordTooShort";
    case RejectReason::KeywordTooLong: return "KeywordTooLong";
    case RejectReason::KeywordNonAlphabetic: return "KeywordNonAlphabetic";
    case RejectReason::NoKeyword: return "NoKeyword";
  }
  return "?";
}

RejectReason parse_reject_reason(std::string_view s) {
  for (auto r : {RejectReason::LowPopularity, RejectReason::ContextTooShort, RejectReason::ContextTooLong,
                 RejectReason::KeywordTooManyWords, RejectReason::KeywordTooShort, RejectReason::KeywordTooLong,
                 RejectReason::KeywordNonAlphabetic, RejectReason::NoKeyword}) {
    if (to_string(r) == s) return r;
  }
  throw Error(Errc::MalformedRecord, "unknown reject reason '" + std::string(s) + "'");
}

void to_json(nlohmann::json& j, const ScreenDecision& d) {
  std::vector<std::string_view> reasons;
  for (auto r : d.reasons) reasons.push_back(to_string(r));
  j = nlohmann::json{{"accepted", d.accepted}, {"reasons", reasons}};
  j["kept_keyword"] = d.kept_keyword ? nlohmann::json(*d.kept_keyword) : nlohmann::json(nullptr);
}

void from_json(const nlohmann::json& j, ScreenDecision& d) {
  d.accepted = j.at("accepted").get<bool>();
  d.kept_keyword = j.contains("kept_keyword") && !j["kept_keyword"].is_null()
                       ? std::optional<std::string>(j["kept_keyword"].get<std::string>())
                       : std::nullopt;
  d.reasons.clear();
  for (const auto& r : j.value("reasons", std::vector<std::string>{})) d.reasons.push_back(parse_reject_reason(r));
}

KeywordCheck keyword_ok(std::string_view keyword, const ScreenConfig& cfg) {
  KeywordCheck out;
  std::size_t words = keyword.empty() ? 0 : 1;
  bool alphabetic = !keyword.empty();
  bool prev_space = true;  // leading space is malformed
  std::size_t pos = 0;
  while (pos < keyword.size()) {
    const char32_t cp = text::decode_next(keyword, pos);
    if (cp == ' ') {
      if (prev_space) alphabetic = false;
      ++words;
      prev_space = true;
      continue;
    }
    prev_space = false;
    const bool letter = cfg.ascii_only ? (cp < 0x80 && text::is_letter(cp)) : text::is_letter(cp);
    if (!letter) alphabetic = false;
  }
  if (prev_space && !keyword.empty()) alphabetic = false;  // trailing space

  const std::size_t letters = text::letter_count(keyword);
  if (words > cfg.max_keyword_words) out.reasons.push_back(RejectReason::KeywordTooManyWords);
  if (letters < cfg.min_keyword_chars) out.reasons.push_back(RejectReason::KeywordTooShort);
  if (letters > cfg.max_keyword_chars) out.reasons.push_back(RejectReason::KeywordTooLong);
  if (!alphabetic) out.reasons.push_back(RejectReason::KeywordNonAlphabetic);
  out.pass = out.reasons.empty();
  return out;
}

ScreenDecision screen_page(const PageRecord& page, const ScreenConfig& cfg) {
  ScreenDecision d;
  const bool enough_views = page.views > cfg.min_views;
  const bool important = page.importance == cfg.required_importance;
  const bool popular = cfg.popularity_rule == PopularityRule::AnyOf ? (enough_views || important)
                                                                     : (enough_views && important);
  if (!popular) d.reasons.push_back(RejectReason::LowPopularity);

  const std::size_t words = text::word_count(page.lead_text);
  if (words < cfg.min_context_words) d.reasons.push_back(RejectReason::ContextTooShort);
  if (words > cfg.max_context_words) d.reasons.push_back(RejectReason::ContextTooLong);

  std::vector<RejectReason> keyword_reasons;
  for (const auto& keyword : page.keywords) {
    auto check = keyword_ok(keyword, cfg);
    if (check.pass) {
      d.kept_keyword = keyword;
      break;
    }
    for (auto r : check.reasons) {
      if (std::find(keyword_reasons.begin(), keyword_reasons.end(), r) == keyword_reasons.end())
        keyword_reasons.push_back(r);
    }
  }
  if (!d.kept_keyword) {
    d.reasons.push_back(RejectReason::NoKeyword);
    d.reasons.insert(d.reasons.end(), keyword_reasons.begin(), keyword_reasons.end());
  }
  d.accepted = d.reasons.empty();
  return d;
}

}  // namespace eduverba
