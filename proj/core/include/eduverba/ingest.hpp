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
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "eduverba/error.hpp"

namespace eduverba {

/// WikiProject assessment importance, ordered from least to most important.
enum class Importance { Unknown, Low, Mid, High, Top };

std::string_view to_string(Importance importance) noexcept;
/// Case-insensitive; anything unrecognized maps to Unknown.
Importance parse_importance(std::string_view s) noexcept;

struct PageRecord {
  std::string title;
  std::string lead_text;
  std::vector<std::string> keywords;
  std::string category;
  std::vector<std::string> categories;  // every category the source reported
  std::int64_t views = 0;
  Importance importance = Importance::Unknown;
  std::string url;
  std::chrono::system_clock::time_point fetched_at{};

  /// Field-wise equality ignoring fetched_at.
  bool same_content(const PageRecord& other) const;
};

void to_json(nlohmann::json& j, const PageRecord& page);
void from_json(const nlohmann::json& j, PageRecord& page);

std::string format_timestamp(std::chrono::system_clock::time_point t);
std::chrono::system_clock::time_point parse_timestamp(std::string_view s);

struct PageMetadata {
  std::int64_t views = 0;
  Importance importance = Importance::Unknown;
  std::vector<std::string> categories;
  std::string url;
};

struct RawPage {
  std::string title;
  std::string raw_lead;  // lead markup only, headings and later sections cut
};

/// One corpus category and the source-specific query used to list it
/// (a category title for the live API, a directory name for fixtures).
struct CategorySpec {
  std::string name;
  std::string query;
};

/// The twenty-category taxonomy shipped as the default configuration.
std::vector<CategorySpec> default_categories();

/// Where pages come from. Implementations must be safe to call from several
/// threads at once.
class PageSource {
 public:
  virtual ~PageSource() = default;

  virtual std::vector<std::string> list_category_pages(const CategorySpec& category, std::size_t limit) = 0;
  virtual RawPage fetch_raw(const std::string& title) = 0;
  virtual PageMetadata fetch_metadata(const std::string& title) = 0;

  /// Lead text, bold keywords and metadata for `title`. The category is
  /// `category_hint` when given, else the first configured category among
  /// the page's categories. Throws EmptyLead when no prose survives.
  PageRecord fetch_page(const std::string& title, const std::optional<std::string>& category_hint = std::nullopt);

  void set_configured_categories(std::vector<CategorySpec> categories) { configured_ = std::move(categories); }
  const std::vector<CategorySpec>& configured_categories() const { return configured_; }

 private:
  std::vector<CategorySpec> configured_;
};

/// Offline source over `root/<category>/<title>.wiki` plus `<title>.meta`
/// sidecars of key=value lines (views, importance, url, categories).
/// `views` may list daily counts separated by commas; the trailing
/// `window_days` entries are summed.
class FixtureSource final : public PageSource {
 public:
  explicit FixtureSource(std::filesystem::path root, int window_days = 30);

  std::vector<std::string> list_category_pages(const CategorySpec& category, std::size_t limit) override;
  RawPage fetch_raw(const std::string& title) override;
  PageMetadata fetch_metadata(const std::string& title) override;

  const std::filesystem::path& root() const { return root_; }

  static std::string file_stem_for(const std::string& title);
  static std::string title_for(const std::string& file_stem);

 private:
  /// Category directories containing the page, configured order first.
  std::vector<std::string> directories_with(const std::string& title) const;

  std::filesystem::path root_;
  int window_days_;
};

struct LiveSourceConfig {
  std::string api_url = "https://en.wikipedia.org/w/api.php";
  std::string pageviews_url = "https://wikimedia.org/api/rest_v1";
  std::string project = "en.wikipedia";
  std::string user_agent = "eduverba/0.3 (educational crossword dataset builder)";
  std::chrono::milliseconds politeness_delay{200};
  std::chrono::seconds timeout{30};
  int window_days = 30;
  int max_retries = 3;
  /// Last day of the page-view window as YYYYMMDD; empty means yesterday (UTC).
  std::string window_end;

  /// Applies EDUVERBA_WIKI_API, EDUVERBA_PAGEVIEWS_API, EDUVERBA_USER_AGENT
  /// and EDUVERBA_POLITENESS_MS when set.
  void apply_environment();
};

void to_json(nlohmann::json& j, const LiveSourceConfig& cfg);
void from_json(const nlohmann::json& j, LiveSourceConfig& cfg);

/// Serializes requests per host: at most one request starts per
/// politeness delay.
class RateLimiter {
 public:
  explicit RateLimiter(std::chrono::milliseconds delay) : delay_(delay) {}
  void acquire();

 private:
  std::mutex mu_;
  std::chrono::steady_clock::time_point next_{};
  std::chrono::milliseconds delay_;
};

/// MediaWiki Action API + page-view REST API client.
class LiveSource final : public PageSource {
 public:
  explicit LiveSource(LiveSourceConfig cfg);
  ~LiveSource() override;

  std::vector<std::string> list_category_pages(const CategorySpec& category, std::size_t limit) override;
  RawPage fetch_raw(const std::string& title) override;
  PageMetadata fetch_metadata(const std::string& title) override;

 private:
  nlohmann::json get_json(const std::string& base_url, const std::string& path_and_query, bool allow_404);

  LiveSourceConfig cfg_;
  std::unique_ptr<RateLimiter> limiter_;
};

/// Outcome of fetching one title: the record, or the error that skipped it.
struct FetchOutcome {
  std::string title;
  std::optional<PageRecord> page;
  std::optional<Errc> error;
  std::string message;
};

/// Fetches `titles` with at most `concurrency` requests in flight. Results
/// keep input order.
std::vector<FetchOutcome> fetch_pages(PageSource& source, const std::vector<std::pair<std::string, std::string>>& titles_with_category,
                                      std::size_t concurrency);

}  // namespace eduverba
