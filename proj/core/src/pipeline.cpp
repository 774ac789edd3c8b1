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

#include "eduverba/pipeline.hpp"

#include <fstream>
#include <map>
#include <set>

#include "eduverba/error.hpp"
#include "eduverba/prompt.hpp"
#include "eduverba/text.hpp"

namespace eduverba {
namespace fs = std::filesystem;

void PipelineConfig::validate() const {
  if (categories.empty()) throw Error(Errc::EmptyConfig, "no categories configured");
  for (const auto& c : categories) {
    if (c.name.empty()) throw Error(Errc::InvalidConfig, "category with an empty name");
  }
  if (source == SourceKind::Fixtures && (fixtures_dir.empty() || !fs::is_directory(fixtures_dir)))
    throw Error(Errc::InvalidConfig, "fixtures_dir '" + fixtures_dir.string() + "' is not a directory");
  if (!prompt_template.empty() && !fs::is_regular_file(prompt_template))
    throw Error(Errc::InvalidConfig, "prompt_template '" + prompt_template.string() + "' does not exist");
  if (output_dir.empty()) throw Error(Errc::InvalidConfig, "output_dir is empty");
  if (limit_per_category == 0) throw Error(Errc::InvalidConfig, "limit_per_category must be positive");
  screen.validate();
  gen.validate();
}

void to_json(nlohmann::json& j, const PipelineConfig& cfg) {
  nlohmann::json cats = nlohmann::json::array();
  for (const auto& c : cfg.categories) cats.push_back({{"name", c.name}, {"query", c.query}});
  j = nlohmann::json{{"source", cfg.source == SourceKind::Live ? "live" : "fixtures"},
                     {"fixtures_dir", cfg.fixtures_dir.string()},
                     {"live", cfg.live},
                     {"categories", cats},
                     {"screen", cfg.screen},
                     {"prompt_template", cfg.prompt_template.string()},
                     {"generation", cfg.gen},
                     {"output_dir", cfg.output_dir.string()},
                     {"seed", cfg.seed},
                     {"limit_per_category", cfg.limit_per_category},
                     {"fetch_concurrency", cfg.fetch_concurrency}};
}

void from_json(const nlohmann::json& j, PipelineConfig& cfg) {
  try {
    const std::string source = j.value("source", "fixtures");
    if (source == "fixtures") {
      cfg.source = SourceKind::Fixtures;
    } else if (source == "live") {
      cfg.source = SourceKind::Live;
    } else {
      throw Error(Errc::InvalidConfig, "source must be 'fixtures' or 'live', got '" + source + "'");
    }
    cfg.fixtures_dir = j.value("fixtures_dir", cfg.fixtures_dir.string());
    if (j.contains("live")) cfg.live = j["live"].get<LiveSourceConfig>();
    if (j.contains("categories")) {
      cfg.categories.clear();
      for (const auto& c : j["categories"]) {
        if (c.is_string()) {
          const auto name = c.get<std::string>();
          cfg.categories.push_back({name, "Category:" + name});
        } else {
          const auto name = c.at("name").get<std::string>();
          cfg.categories.push_back({name, c.value("query", "Category:" + name)});
        }
      }
    }
    if (j.contains("screen")) cfg.screen = j["screen"].get<ScreenConfig>();
    if (j.contains("prompt_template") && !j["prompt_template"].is_null())
      cfg.prompt_template = j["prompt_template"].get<std::string>();
    if (j.contains("generation")) cfg.gen = j["generation"].get<GenParams>();
    cfg.output_dir = j.value("output_dir", cfg.output_dir.string());
    cfg.seed = j.value("seed", cfg.seed);
    cfg.limit_per_category = j.value("limit_per_category", cfg.limit_per_category);
    cfg.fetch_concurrency = j.value("fetch_concurrency", cfg.fetch_concurrency);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::InvalidConfig, std::string("pipeline config: ") + e.what());
  }
}

PipelineConfig load_pipeline_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::InvalidConfig, "cannot read config '" + path.string() + "'");
  const auto j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(Errc::InvalidConfig, "'" + path.string() + "' is not a JSON object");
  auto cfg = j.get<PipelineConfig>();
  const fs::path base = path.parent_path();
  auto resolve = [&](fs::path& p) {
    if (!p.empty() && p.is_relative()) p = base / p;
  };
  resolve(cfg.fixtures_dir);
  resolve(cfg.prompt_template);
  resolve(cfg.output_dir);
  return cfg;
}

std::string config_hash(const PipelineConfig& cfg) {
  nlohmann::json j = cfg;
  // Paths differ between machines; the output location does not change what gets built.
  j.erase("output_dir");
  return hex64(fnv1a64(j.dump()));
}

std::unique_ptr<PageSource> make_source(const PipelineConfig& cfg) {
  std::unique_ptr<PageSource> source;
  if (cfg.source == SourceKind::Live) {
    auto live = cfg.live;
    live.apply_environment();
    source = std::make_unique<LiveSource>(live);
  } else {
    source = std::make_unique<FixtureSource>(cfg.fixtures_dir, cfg.live.window_days);
  }
  source->set_configured_categories(cfg.categories);
  return source;
}

PipelineOutputs::PipelineOutputs(const fs::path& dir)
    : pages(dir / "pages.jsonl"),
      decisions(dir / "decisions.jsonl"),
      generations(dir / "generations.jsonl"),
      corpus(dir / "corpus.jsonl"),
      progress(dir / "progress.jsonl"),
      manifest(dir / "manifest.json") {}

namespace {

template <typename Fn>
auto in_stage(std::string_view stage, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), "stage " + std::string(stage) + ": " + e.what());
  } catch (const std::exception& e) {
    throw Error(Errc::InvariantViolation, "stage " + std::string(stage) + ": " + e.what());
  }
}

std::vector<nlohmann::json> read_json_lines(const fs::path& path) {
  std::vector<nlohmann::json> out;
  std::ifstream in(path, std::ios::binary);
  for (std::string line; std::getline(in, line);) {
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (!j.is_discarded() && j.is_object()) out.push_back(std::move(j));
  }
  return out;
}

class Appender {
 public:
  explicit Appender(const fs::path& path) : out_(path, std::ios::binary | std::ios::app) {
    if (!out_) throw Error(Errc::CorpusUnreadable, "cannot append to '" + path.string() + "'");
  }
  void line(const std::string& s) {
    out_ << s << '\n';
    out_.flush();
  }

 private:
  std::ofstream out_;
};

nlohmann::ordered_json cumulative_counts(const std::vector<nlohmann::json>& progress) {
  std::size_t fetched = 0, fetch_failed = 0, accepted = 0, rejected = 0, rows = 0, attempts = 0;
  std::map<std::string, std::size_t> by_reason;
  std::map<std::string, std::size_t> by_status{{"Valid", 0}, {"Malformed", 0}, {"Leaked", 0}, {"Empty", 0}};
  for (const auto& p : progress) {
    const std::string outcome = p.value("outcome", "");
    if (outcome == "fetch_failed") {
      ++fetch_failed;
      continue;
    }
    ++fetched;
    if (outcome == "rejected") {
      ++rejected;
      for (const auto& r : p.value("reasons", nlohmann::json::array())) ++by_reason[r.get<std::string>()];
      continue;
    }
    ++accepted;
    ++by_status[p.value("status", "Empty")];
    attempts += p.value("attempts", 0);
    if (outcome == "row") ++rows;
  }
  nlohmann::ordered_json reasons = nlohmann::ordered_json::object();
  for (const auto& [k, v] : by_reason) reasons[k] = v;
  nlohmann::ordered_json statuses = nlohmann::ordered_json::object();
  for (const char* k : {"Valid", "Malformed", "Leaked", "Empty"}) statuses[k] = by_status[k];
  return {{"pages_fetched", fetched},
          {"fetch_failed", fetch_failed},
          {"accepted", accepted},
          {"rejected", rejected},
          {"rejected_by_reason", reasons},
          {"generation", statuses},
          {"generation_attempts", attempts},
          {"rows_written", rows}};
}

}  // namespace

Manifest run_pipeline(const PipelineConfig& cfg, ChatClient& client, PageSource* source) {
  cfg.validate();
  fs::create_directories(cfg.output_dir);
  const PipelineOutputs out(cfg.output_dir);

  std::unique_ptr<PageSource> owned;
  if (!source) {
    owned = make_source(cfg);
    source = owned.get();
  } else {
    source->set_configured_categories(cfg.categories);
  }
  const PromptTemplate tpl = cfg.prompt_template.empty()
                                 ? PromptTemplate::default_template(cfg.gen.num_clues)
                                 : PromptTemplate::from_file(cfg.prompt_template, cfg.gen.num_clues);
  std::vector<std::string> category_names;
  for (const auto& c : cfg.categories) category_names.push_back(c.name);

  auto progress = read_json_lines(out.progress);
  std::set<std::string> done;
  for (const auto& p : progress) done.insert(p.value("title", ""));
  std::set<std::string> corpus_ids;
  for (const auto& row : read_json_lines(out.corpus)) corpus_ids.insert(row.value("id", ""));

  // A page belongs to the first configured category that lists it.
  std::vector<std::pair<std::string, std::string>> work;
  std::set<std::string> listed;
  in_stage("ingest", [&] {
    for (const auto& cat : cfg.categories) {
      for (auto& title : source->list_category_pages(cat, cfg.limit_per_category)) {
        if (!listed.insert(title).second) continue;
        if (!done.count(title)) work.emplace_back(title, cat.name);
      }
    }
    return 0;
  });

  Appender pages_out(out.pages), decisions_out(out.decisions), generations_out(out.generations),
      corpus_out(out.corpus), progress_out(out.progress);

  const std::size_t batch = std::max<std::size_t>(1, cfg.gen.concurrency) * 4;
  for (std::size_t start = 0; start < work.size(); start += batch) {
    const std::vector<std::pair<std::string, std::string>> chunk(
        work.begin() + static_cast<std::ptrdiff_t>(start),
        work.begin() + static_cast<std::ptrdiff_t>(std::min(work.size(), start + batch)));

    const auto fetched = in_stage("ingest", [&] { return fetch_pages(*source, chunk, cfg.fetch_concurrency); });

    std::vector<ScreenDecision> decisions(fetched.size());
    std::vector<GenerationRequest> requests;
    std::vector<std::size_t> request_of(fetched.size(), SIZE_MAX);
    in_stage("screen", [&] {
      for (std::size_t i = 0; i < fetched.size(); ++i) {
        if (!fetched[i].page) continue;
        decisions[i] = screen_page(*fetched[i].page, cfg.screen);
      }
      return 0;
    });
    in_stage("prompt", [&] {
      for (std::size_t i = 0; i < fetched.size(); ++i) {
        if (!fetched[i].page || !decisions[i].accepted) continue;
        const auto& page = *fetched[i].page;
        request_of[i] = requests.size();
        requests.push_back({render_prompt(tpl, page.lead_text, *decisions[i].kept_keyword, page.category).text,
                            *decisions[i].kept_keyword});
      }
      return 0;
    });
    const auto clue_sets = in_stage("generate", [&] { return generate_all(client, requests, cfg.gen); });

    in_stage("build", [&] {
      for (std::size_t i = 0; i < fetched.size(); ++i) {
        nlohmann::ordered_json entry{{"title", fetched[i].title}, {"category", chunk[i].second}};
        if (!fetched[i].page) {
          entry["outcome"] = "fetch_failed";
          entry["error"] = fetched[i].message;
          progress_out.line(entry.dump());
          continue;
        }
        const PageRecord& page = *fetched[i].page;
        pages_out.line(nlohmann::json(page).dump());
        decisions_out.line(nlohmann::json{{"title", page.title}, {"decision", decisions[i]}}.dump());
        if (!decisions[i].accepted) {
          entry["outcome"] = "rejected";
          nlohmann::ordered_json reasons = nlohmann::ordered_json::array();
          for (auto r : decisions[i].reasons) reasons.push_back(std::string(to_string(r)));
          entry["reasons"] = reasons;
          progress_out.line(entry.dump());
          continue;
        }
        const ClueSet& clues = clue_sets[request_of[i]];
        generations_out.line(
            nlohmann::json{{"title", page.title}, {"keyword", *decisions[i].kept_keyword}, {"result", clues}}.dump());
        entry["status"] = std::string(to_string(clues.status));
        entry["attempts"] = clues.attempts;
        if (clues.status == ClueStatus::Valid) {
          const auto example = build_example(page, decisions[i], clues, cfg.screen, category_names);
          if (corpus_ids.insert(example.id).second) corpus_out.line(corpus_line(example));
          entry["outcome"] = "row";
          entry["id"] = example.id;
        } else {
          entry["outcome"] = "not_valid";
        }
        progress_out.line(entry.dump());
      }
      return 0;
    });
  }

  progress = read_json_lines(out.progress);
  Manifest manifest;
  manifest.seed = cfg.seed;
  manifest.config_hash = config_hash(cfg);
  manifest.tool_version = tool_version();
  manifest.counts = cumulative_counts(progress);
  manifest.counts["pages_listed"] = listed.size();
  manifest.counts["corpus_rows"] = corpus_ids.size();
  manifest.counts["run"] = {{"new_pages", work.size()}, {"noop", work.empty()}};
  write_manifest(out.manifest, manifest);
  return manifest;
}

}  // namespace eduverba
