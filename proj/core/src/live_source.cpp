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

#include <httplib.h>

#include <algorithm>
#include <ctime>
#include <thread>

#include "eduverba/ingest.hpp"
#include "http_util.hpp"

namespace eduverba {
namespace detail {

SplitUrl split_url(std::string_view url) {
  const std::size_t scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos) throw Error(Errc::InvalidConfig, "URL without scheme: " + std::string(url));
  const std::size_t path_start = url.find('/', scheme_end + 3);
  SplitUrl out;
  if (path_start == std::string_view::npos) {
    out.origin = std::string(url);
  } else {
    out.origin = std::string(url.substr(0, path_start));
    out.path = std::string(url.substr(path_start));
  }
  while (!out.path.empty() && out.path.back() == '/') out.path.pop_back();
  return out;
}

std::string url_encode(std::string_view s) {
  static constexpr char kHex[] = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(kHex[c >> 4]);
      out.push_back(kHex[c & 15]);
    }
  }
  return out;
}

}  // namespace detail

namespace {

std::string yyyymmdd(std::time_t t) {
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[16];
  std::strftime(buf, sizeof buf, "%Y%m%d", &tm);
  return buf;
}

std::time_t parse_yyyymmdd(const std::string& s) {
  std::tm tm{};
  if (s.size() != 8) throw Error(Errc::InvalidConfig, "window_end must be YYYYMMDD");
  tm.tm_year = std::stoi(s.substr(0, 4)) - 1900;
  tm.tm_mon = std::stoi(s.substr(4, 2)) - 1;
  tm.tm_mday = std::stoi(s.substr(6, 2));
  tm.tm_hour = 12;
  return timegm(&tm);
}

std::string underscored(std::string title) {
  std::replace(title.begin(), title.end(), ' ', '_');
  return title;
}

}  // namespace

LiveSource::LiveSource(LiveSourceConfig cfg)
    : cfg_(std::move(cfg)), limiter_(std::make_unique<RateLimiter>(cfg_.politeness_delay)) {}

LiveSource::~LiveSource() = default;

nlohmann::json LiveSource::get_json(const std::string& base_url, const std::string& path_and_query, bool allow_404) {
  const auto url = detail::split_url(base_url);
  const httplib::Headers headers = {{"User-Agent", cfg_.user_agent}, {"Accept", "application/json"}};
  std::string last_error = "no attempt made";
  const int attempts = std::max(1, cfg_.max_retries);
  for (int attempt = 0; attempt < attempts; ++attempt) {
    if (attempt > 0) std::this_thread::sleep_for(std::chrono::milliseconds(250) * (1 << (attempt - 1)));
    limiter_->acquire();
    httplib::Client client(url.origin);
    client.set_connection_timeout(cfg_.timeout);
    client.set_read_timeout(cfg_.timeout);
    client.set_follow_location(true);
    auto res = client.Get(url.path + path_and_query, headers);
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 200) {
      try {
        return nlohmann::json::parse(res->body);
      } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::SourceUnavailable, std::string("unparseable response: ") + e.what());
      }
    }
    if (res->status == 404 && allow_404) return nullptr;
    last_error = "HTTP " + std::to_string(res->status);
    if (res->status != 429 && res->status < 500) break;
  }
  throw Error(Errc::SourceUnavailable, base_url + path_and_query + ": " + last_error);
}

std::vector<std::string> LiveSource::list_category_pages(const CategorySpec& category, std::size_t limit) {
  if (category.name.empty()) throw Error(Errc::UnknownCategory, "empty category name");
  if (limit == 0) throw Error(Errc::InvalidConfig, "limit must be positive");
  const std::string cmtitle = category.query.empty() ? "Category:" + category.name : category.query;
  std::vector<std::string> titles;
  std::string cont;
  while (titles.size() < limit) {
    const std::size_t batch = std::min<std::size_t>(500, limit - titles.size());
    std::string query = "?action=query&list=categorymembers&cmtype=page&cmnamespace=0&format=json&formatversion=2"
                        "&cmtitle=" +
                        detail::url_encode(cmtitle) + "&cmlimit=" + std::to_string(batch);
    if (!cont.empty()) query += "&cmcontinue=" + detail::url_encode(cont);
    const auto j = get_json(cfg_.api_url, query, false);
    if (j.contains("error")) throw Error(Errc::UnknownCategory, cmtitle + ": " + j["error"].value("info", ""));
    for (const auto& member : j.at("query").at("categorymembers")) {
      const std::string title = member.at("title").get<std::string>();
      if (std::find(titles.begin(), titles.end(), title) == titles.end()) titles.push_back(title);
      if (titles.size() == limit) break;
    }
    if (!j.contains("continue") || !j["continue"].contains("cmcontinue")) break;
    cont = j["continue"]["cmcontinue"].get<std::string>();
  }
  if (titles.empty()) throw Error(Errc::UnknownCategory, "no pages in " + cmtitle);
  return titles;
}

RawPage LiveSource::fetch_raw(const std::string& title) {
  const auto j = get_json(cfg_.api_url,
                          "?action=parse&prop=wikitext&section=0&redirects=1&format=json&formatversion=2&page=" +
                              detail::url_encode(title),
                          false);
  if (j.contains("error")) {
    const std::string code = j["error"].value("code", "");
    if (code == "missingtitle" || code == "invalidtitle") throw Error(Errc::PageNotFound, title);
    throw Error(Errc::SourceUnavailable, title + ": " + j["error"].value("info", code));
  }
  const auto& parse = j.at("parse");
  RawPage raw;
  raw.title = parse.value("title", title);
  const auto& wt = parse.at("wikitext");
  // formatversion=1 wraps the text as {"*": "..."}.
  raw.raw_lead = wt.is_string() ? wt.get<std::string>() : wt.at("*").get<std::string>();
  return raw;
}

PageMetadata LiveSource::fetch_metadata(const std::string& title) {
  PageMetadata meta;
  const auto info = get_json(cfg_.api_url,
                             "?action=query&prop=pageassessments%7Cinfo%7Ccategories&inprop=url&clshow=!hidden"
                             "&cllimit=max&redirects=1&format=json&formatversion=2&titles=" +
                                 detail::url_encode(title),
                             false);
  const auto& pages = info.at("query").at("pages");
  if (pages.empty() || pages[0].value("missing", false) || pages[0].value("invalid", false))
    throw Error(Errc::PageNotFound, title);
  const auto& page = pages[0];
  meta.url = page.value("fullurl", "");
  if (page.contains("pageassessments")) {
    for (const auto& [project, assessment] : page["pageassessments"].items()) {
      meta.importance = std::max(meta.importance, parse_importance(assessment.value("importance", "")));
    }
  }
  if (page.contains("categories")) {
    for (const auto& c : page["categories"]) {
      std::string name = c.at("title").get<std::string>();
      if (name.starts_with("Category:")) name.erase(0, 9);
      meta.categories.push_back(std::move(name));
    }
  }

  const std::time_t end = cfg_.window_end.empty() ? std::time(nullptr) - 86400 : parse_yyyymmdd(cfg_.window_end);
  const std::time_t start = end - static_cast<std::time_t>(cfg_.window_days - 1) * 86400;
  const std::string path = "/metrics/pageviews/per-article/" + cfg_.project + "/all-access/user/" +
                           detail::url_encode(underscored(page.value("title", title))) + "/daily/" + yyyymmdd(start) +
                           "00/" + yyyymmdd(end) + "00";
  const auto views = get_json(cfg_.pageviews_url, path, true);
  if (!views.is_null()) {
    for (const auto& item : views.at("items")) meta.views += item.value("views", std::int64_t{0});
  }
  return meta;
}

}  // namespace eduverba
