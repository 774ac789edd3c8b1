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

#include "eduverba/ingest.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "eduverba/parallel.hpp"
#include "eduverba/text.hpp"
#include "eduverba/wikitext.hpp"

namespace eduverba {

std::string_view to_string(Importance importance) noexcept {
  switch (importance) {
    case Importance::Top: return "Top";
    case Importance::High: return "High";
    case Importance::Mid: return "Mid";
    case Importance::Low: return "Low";
    case Importance::Unknown: break;
  }
  return "Unknown";
}

Importance parse_importance(std::string_view s) noexcept {
  const std::string lower = text::lowercase(text::trim(s));
  if (lower == "top") return Importance::Top;
  if (lower == "high") return Importance::High;
  if (lower == "mid") return Importance::Mid;
  if (lower == "low") return Importance::Low;
  return Importance::Unknown;
}

bool PageRecord::same_content(const PageRecord& o) const {
  return title == o.title && lead_text == o.lead_text && keywords == o.keywords && category == o.category &&
         categories == o.categories && views == o.views && importance == o.importance && url == o.url;
}

std::string format_timestamp(std::chrono::system_clock::time_point t) {
  const std::time_t secs = std::chrono::system_clock::to_time_t(t);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::chrono::system_clock::time_point parse_timestamp(std::string_view s) {
  std::tm tm{};
  const std::string str(s);
  if (std::sscanf(str.c_str(), "%d-%d-%dT%d:%d:%d", &tm.tm_year, &tm.tm_mon, &tm.tm_mday, &tm.tm_hour, &tm.tm_min,
                  &tm.tm_sec) != 6)
    throw Error(Errc::MalformedRecord, "bad timestamp '" + str + "'");
  tm.tm_year -= 1900;
  tm.tm_mon -= 1;
  return std::chrono::system_clock::from_time_t(timegm(&tm));
}

void to_json(nlohmann::json& j, const PageRecord& p) {
  j = nlohmann::json{{"title", p.title},
                     {"lead_text", p.lead_text},
                     {"keywords", p.keywords},
                     {"category", p.category},
                     {"categories", p.categories},
                     {"views", p.views},
                     {"importance", to_string(p.importance)},
                     {"url", p.url},
                     {"fetched_at", format_timestamp(p.fetched_at)}};
}

void from_json(const nlohmann::json& j, PageRecord& p) {
  p.title = j.at("title").get<std::string>();
  p.lead_text = j.at("lead_text").get<std::string>();
  p.keywords = j.value("keywords", std::vector<std::string>{});
  p.category = j.value("category", "");
  p.categories = j.value("categories", std::vector<std::string>{});
  p.views = j.value("views", std::int64_t{0});
  if (p.views < 0) throw Error(Errc::MalformedRecord, "negative views for '" + p.title + "'");
  p.importance = parse_importance(j.value("importance", "Unknown"));
  p.url = j.value("url", "");
  p.fetched_at = j.contains("fetched_at") ? parse_timestamp(j.at("fetched_at").get<std::string>())
                                          : std::chrono::system_clock::time_point{};
}

std::vector<CategorySpec> default_categories() {
  // Ordered by prevalence where known (most frequent first, least frequent last).
  static const char* const kNames[] = {"Geography", "Science",    "Applied Science", "History",   "Society",
                                       "Culture",   "Arts",       "Literature",      "Music",     "Film",
                                       "Religion",  "Philosophy", "Mathematics",     "Technology", "Health",
                                       "Politics",  "Sports",     "Biography",       "Games",     "Education"};
  std::vector<CategorySpec> out;
  for (const char* name : kNames) out.push_back({name, std::string("Category:") + name});
  return out;
}

namespace {

std::string strip_category_prefix(std::string_view s) {
  s = text::trim(s);
  if (s.size() > 9 && text::iequals(s.substr(0, 9), "Category:")) s.remove_prefix(9);
  return std::string(s);
}

bool category_matches(const CategorySpec& spec, std::string_view page_category) {
  const std::string bare = strip_category_prefix(page_category);
  return text::iequals(bare, spec.name) || text::iequals(bare, strip_category_prefix(spec.query));
}

}  // namespace

PageRecord PageSource::fetch_page(const std::string& title, const std::optional<std::string>& category_hint) {
  if (title.empty()) throw Error(Errc::PageNotFound, "empty title");
  RawPage raw = fetch_raw(title);
  PageRecord page;
  page.title = raw.title.empty() ? title : raw.title;
  page.lead_text = wikitext::strip_markup(raw.raw_lead);
  if (text::word_count(page.lead_text) == 0) throw Error(Errc::EmptyLead, "no lead text for '" + title + "'");
  page.keywords = wikitext::extract_bold_keywords(raw.raw_lead);

  PageMetadata meta = fetch_metadata(title);
  page.views = meta.views;
  page.importance = meta.importance;
  page.categories = std::move(meta.categories);
  page.url = std::move(meta.url);
  if (category_hint) {
    page.category = *category_hint;
  } else {
    for (const auto& spec : configured_) {
      const bool hit = std::any_of(page.categories.begin(), page.categories.end(),
                                   [&](const std::string& c) { return category_matches(spec, c); });
      if (hit) {
        page.category = spec.name;
        break;
      }
    }
    if (page.category.empty() && configured_.empty() && !page.categories.empty())
      page.category = strip_category_prefix(page.categories.front());
  }
  page.fetched_at = std::chrono::system_clock::now();
  return page;
}

// --- fixtures ---------------------------------------------------------------

FixtureSource::FixtureSource(std::filesystem::path root, int window_days)
    : root_(std::move(root)), window_days_(window_days) {
  if (!std::filesystem::is_directory(root_))
    throw Error(Errc::SourceUnavailable, "fixture directory '" + root_.string() + "' does not exist");
  if (window_days_ <= 0) throw Error(Errc::InvalidConfig, "page-view window must be positive");
}

std::string FixtureSource::file_stem_for(const std::string& title) {
  std::string out;
  for (char c : title) {
    if (c == '/') {
      out += "%2F";
    } else {
      out.push_back(c);
    }
  }
  return out;
}

std::string FixtureSource::title_for(const std::string& stem) {
  std::string out;
  for (std::size_t i = 0; i < stem.size(); ++i) {
    if (stem.compare(i, 3, "%2F") == 0) {
      out.push_back('/');
      i += 2;
    } else {
      out.push_back(stem[i]);
    }
  }
  return out;
}

std::vector<std::string> FixtureSource::list_category_pages(const CategorySpec& category, std::size_t limit) {
  if (category.name.empty()) throw Error(Errc::UnknownCategory, "empty category name");
  if (limit == 0) throw Error(Errc::InvalidConfig, "limit must be positive");
  const std::string dir_name = category.query.empty() || category.query.starts_with("Category:")
                                   ? category.name
                                   : category.query;
  const auto dir = root_ / dir_name;
  if (!std::filesystem::is_directory(dir)) throw Error(Errc::UnknownCategory, "no fixture category '" + dir_name + "'");
  std::vector<std::string> titles;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".wiki")
      titles.push_back(title_for(entry.path().stem().string()));
  }
  std::sort(titles.begin(), titles.end());
  if (titles.size() > limit) titles.resize(limit);
  return titles;
}

std::vector<std::string> FixtureSource::directories_with(const std::string& title) const {
  const std::string file = file_stem_for(title) + ".wiki";
  std::vector<std::string> found;
  for (const auto& spec : configured_categories()) {
    if (std::filesystem::exists(root_ / spec.name / file)) found.push_back(spec.name);
  }
  std::vector<std::string> rest;
  for (const auto& entry : std::filesystem::directory_iterator(root_)) {
    if (!entry.is_directory()) continue;
    const std::string name = entry.path().filename().string();
    if (std::find(found.begin(), found.end(), name) == found.end() && std::filesystem::exists(entry.path() / file))
      rest.push_back(name);
  }
  std::sort(rest.begin(), rest.end());
  found.insert(found.end(), rest.begin(), rest.end());
  return found;
}

RawPage FixtureSource::fetch_raw(const std::string& title) {
  const auto dirs = directories_with(title);
  if (dirs.empty()) throw Error(Errc::PageNotFound, "no fixture page '" + title + "'");
  std::ifstream in(root_ / dirs.front() / (file_stem_for(title) + ".wiki"), std::ios::binary);
  if (!in) throw Error(Errc::SourceUnavailable, "cannot read fixture page '" + title + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string content = buf.str();
  return RawPage{title, std::string(wikitext::lead_section(content))};
}

PageMetadata FixtureSource::fetch_metadata(const std::string& title) {
  const auto dirs = directories_with(title);
  if (dirs.empty()) throw Error(Errc::PageNotFound, "no fixture page '" + title + "'");
  PageMetadata meta;
  meta.categories = dirs;

  std::ifstream in(root_ / dirs.front() / (file_stem_for(title) + ".meta"));
  if (!in) return meta;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view trimmed = text::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const std::size_t eq = trimmed.find('=');
    if (eq == std::string_view::npos) continue;
    const std::string key(text::trim(trimmed.substr(0, eq)));
    const std::string value(text::trim(trimmed.substr(eq + 1)));
    std::vector<std::string> items;
    std::stringstream ss(value);
    for (std::string item; std::getline(ss, item, ',');) {
      if (!text::trim(item).empty()) items.emplace_back(text::trim(item));
    }
    if (key == "views") {
      const std::size_t first = items.size() > static_cast<std::size_t>(window_days_) ? items.size() - window_days_ : 0;
      for (std::size_t i = first; i < items.size(); ++i) {
        char* end = nullptr;
        const long long v = std::strtoll(items[i].c_str(), &end, 10);
        if (*end != '\0' || v < 0) throw Error(Errc::MalformedRecord, "bad view count in '" + title + ".meta'");
        meta.views += v;
      }
    } else if (key == "importance") {
      // Several project assessments: keep the highest.
      for (const auto& item : items) meta.importance = std::max(meta.importance, parse_importance(item));
    } else if (key == "url") {
      meta.url = value;
    } else if (key == "categories") {
      for (auto& item : items) {
        if (std::find(meta.categories.begin(), meta.categories.end(), item) == meta.categories.end())
          meta.categories.push_back(std::move(item));
      }
    }
  }
  return meta;
}

// --- live config / rate limiting --------------------------------------------

void LiveSourceConfig::apply_environment() {
  if (const char* v = std::getenv("EDUVERBA_WIKI_API")) api_url = v;
  if (const char* v = std::getenv("EDUVERBA_PAGEVIEWS_API")) pageviews_url = v;
  if (const char* v = std::getenv("EDUVERBA_USER_AGENT")) user_agent = v;
  if (const char* v = std::getenv("EDUVERBA_POLITENESS_MS")) politeness_delay = std::chrono::milliseconds(std::atol(v));
}

void to_json(nlohmann::json& j, const LiveSourceConfig& c) {
  j = nlohmann::json{{"api_url", c.api_url},
                     {"pageviews_url", c.pageviews_url},
                     {"project", c.project},
                     {"user_agent", c.user_agent},
                     {"politeness_delay_ms", c.politeness_delay.count()},
                     {"timeout_s", c.timeout.count()},
                     {"window_days", c.window_days},
                     {"max_retries", c.max_retries},
                     {"window_end", c.window_end}};
}

void from_json(const nlohmann::json& j, LiveSourceConfig& c) {
  c.api_url = j.value("api_url", c.api_url);
  c.pageviews_url = j.value("pageviews_url", c.pageviews_url);
  c.project = j.value("project", c.project);
  c.user_agent = j.value("user_agent", c.user_agent);
  c.politeness_delay = std::chrono::milliseconds(j.value("politeness_delay_ms", c.politeness_delay.count()));
  c.timeout = std::chrono::seconds(j.value("timeout_s", c.timeout.count()));
  c.window_days = j.value("window_days", c.window_days);
  c.max_retries = j.value("max_retries", c.max_retries);
  c.window_end = j.value("window_end", c.window_end);
}

void RateLimiter::acquire() {
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(mu_);
    const auto now = std::chrono::steady_clock::now();
    slot = std::max(now, next_);
    next_ = slot + delay_;
  }
  std::this_thread::sleep_until(slot);
}

std::vector<FetchOutcome> fetch_pages(PageSource& source,
                                      const std::vector<std::pair<std::string, std::string>>& titles_with_category,
                                      std::size_t concurrency) {
  return parallel_map(titles_with_category.size(), concurrency, [&](std::size_t i) {
    const auto& [title, category] = titles_with_category[i];
    FetchOutcome out;
    out.title = title;
    try {
      out.page = source.fetch_page(title, category.empty() ? std::nullopt : std::optional<std::string>(category));
    } catch (const Error& e) {
      out.error = e.code();
      out.message = e.what();
    }
    return out;
  });
}

}  // namespace eduverba
