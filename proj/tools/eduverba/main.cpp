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

#include <CLI11.hpp>

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <thread>

#include "eduverba/dataset.hpp"
#include "eduverba/error.hpp"
#include "eduverba/generate.hpp"
#include "eduverba/grid.hpp"
#include "eduverba/ingest.hpp"
#include "eduverba/metrics.hpp"
#include "eduverba/mock_llm.hpp"
#include "eduverba/pipeline.hpp"
#include "eduverba/prompt.hpp"
#include "eduverba/rating.hpp"
#include "eduverba/screen.hpp"
#include "eduverba/serve.hpp"

namespace fs = std::filesystem;
using namespace eduverba;

namespace {

std::vector<nlohmann::json> read_lines(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::CorpusUnreadable, "cannot open '" + path.string() + "'");
  std::vector<nlohmann::json> rows;
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw Error(Errc::MalformedRecord, path.string() + ":" + std::to_string(n) + ": bad JSON");
    rows.push_back(std::move(j));
  }
  return rows;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file_.open(path, std::ios::binary | std::ios::trunc);
    if (!file_) throw Error(Errc::CorpusUnreadable, "cannot write '" + path + "'");
  }
  std::ostream& operator*() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

// --config, else EDUVERBA_CONFIG, else defaults.
PipelineConfig resolve_config(const std::string& flag) {
  std::string path = flag;
  if (path.empty()) {
    if (const char* env = std::getenv("EDUVERBA_CONFIG")) path = env;
  }
  if (path.empty()) return PipelineConfig{};
  return load_pipeline_config(path);
}

PromptTemplate resolve_template(const std::string& flag, const PipelineConfig& cfg) {
  if (!flag.empty()) return PromptTemplate::from_file(flag, cfg.gen.num_clues);
  if (!cfg.prompt_template.empty()) return PromptTemplate::from_file(cfg.prompt_template, cfg.gen.num_clues);
  return PromptTemplate::default_template(cfg.gen.num_clues);
}

std::vector<GridEntry> read_grid_entries(const fs::path& path) {
  std::vector<GridEntry> entries;
  for (const auto& row : read_lines(path)) {
    GridEntry e;
    e.keyword = row.value("keyword", "");
    e.id = row.value("id", "");
    if (row.contains("clue")) {
      e.clue = row["clue"].get<std::string>();
    } else if (row.contains("clues") && row["clues"].is_array() && !row["clues"].empty()) {
      e.clue = row["clues"][row.value("clue_index", 0)].get<std::string>();
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

volatile std::sig_atomic_t g_stop = 0;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Build, evaluate and curate educational crossword clue datasets"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());
  std::string config_path;
  app.add_option("-c,--config", config_path, "Pipeline config (JSON); defaults to $EDUVERBA_CONFIG");

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Fetch category pages into page records");
  std::string ingest_out = "pages.jsonl", fixtures;
  std::vector<std::string> ingest_categories;
  std::size_t ingest_limit = 0;
  bool ingest_live = false;
  ingest->add_option("-o,--out", ingest_out, "Page records (JSONL)");
  ingest->add_option("--fixtures", fixtures, "Fixture directory (overrides config)");
  ingest->add_flag("--live", ingest_live, "Use the live wiki APIs");
  ingest->add_option("--category", ingest_categories, "Category to list (repeatable)");
  ingest->add_option("--limit", ingest_limit, "Pages per category");

  // screen
  auto* screen = app.add_subcommand("screen", "Apply popularity, context and keyword filters");
  std::string screen_in = "pages.jsonl", screen_out = "screened.jsonl", screen_report, screen_rule;
  std::optional<std::int64_t> min_views;
  std::optional<std::string> required_importance;
  std::optional<std::size_t> min_context, max_context, max_kw_words, min_kw_chars, max_kw_chars;
  bool ascii_only = false;
  screen->add_option("-i,--in", screen_in, "Page records");
  screen->add_option("-o,--out", screen_out, "Page plus decision per line");
  screen->add_option("--report", screen_report, "Rejected pages with reasons");
  screen->add_option("--min-views", min_views);
  screen->add_option("--required-importance", required_importance);
  screen->add_option("--popularity-rule", screen_rule, "any or all");
  screen->add_option("--min-context-words", min_context);
  screen->add_option("--max-context-words", max_context);
  screen->add_option("--max-keyword-words", max_kw_words);
  screen->add_option("--min-keyword-chars", min_kw_chars);
  screen->add_option("--max-keyword-chars", max_kw_chars);
  screen->add_flag("--ascii-only", ascii_only);

  // generate
  auto* generate = app.add_subcommand("generate", "Request clues for accepted pages");
  std::string gen_in = "screened.jsonl", gen_out = "generations.jsonl", gen_template, gen_endpoint, gen_model;
  generate->add_option("-i,--in", gen_in, "Output of screen");
  generate->add_option("-o,--out", gen_out, "Generations (JSONL)");
  generate->add_option("--template", gen_template, "Prompt template file");
  generate->add_option("--endpoint", gen_endpoint, "Chat-completions URL");
  generate->add_option("--model", gen_model, "Model name sent to the endpoint");

  // build
  auto* build = app.add_subcommand("build", "Turn Valid generations into corpus rows");
  std::string build_in = "generations.jsonl", build_out = "corpus.jsonl", build_manifest;
  build->add_option("-i,--in", build_in, "Output of generate");
  build->add_option("-o,--out", build_out, "Corpus (JSONL)");
  build->add_option("--manifest", build_manifest, "Manifest path");

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "Corpus counts and length histograms");
  std::string stats_in = "corpus.jsonl", stats_out;
  stats_cmd->add_option("-i,--in", stats_in, "Corpus");
  stats_cmd->add_option("-o,--out", stats_out, "JSON report (stdout by default)");

  // split
  auto* split_cmd = app.add_subcommand("split", "Stratified train/test split");
  std::string split_in = "corpus.jsonl", train_out = "train.jsonl", test_out = "test.jsonl";
  std::size_t test_size = 600;
  std::optional<std::uint64_t> split_seed;
  split_cmd->add_option("-i,--in", split_in, "Corpus");
  split_cmd->add_option("--test-size", test_size, "Rows in the test half");
  split_cmd->add_option("--seed", split_seed, "Seed (defaults to the config seed)");
  split_cmd->add_option("--train-out", train_out);
  split_cmd->add_option("--test-out", test_out);

  // truncate
  auto* truncate_cmd = app.add_subcommand("truncate", "Nested uniform subset of a training file");
  std::string trunc_in = "train.jsonl", trunc_out;
  double fraction = 1.0;
  std::optional<std::uint64_t> trunc_seed;
  truncate_cmd->add_option("-i,--in", trunc_in, "Training corpus");
  truncate_cmd->add_option("-f,--fraction", fraction, "Fraction in (0,1]")->required();
  truncate_cmd->add_option("--seed", trunc_seed);
  truncate_cmd->add_option("-o,--out", trunc_out)->required();

  // export
  auto* export_cmd = app.add_subcommand("export", "Instruction-tuning records (input/target)");
  std::string export_in = "train.jsonl", export_out = "-", export_template;
  export_cmd->add_option("-i,--in", export_in);
  export_cmd->add_option("-o,--out", export_out);
  export_cmd->add_option("--template", export_template);

  // evaluate
  auto* evaluate_cmd = app.add_subcommand("evaluate", "ROUGE-1/2/L of generated clues against references");
  std::string eval_hyp, eval_ref = "test.jsonl", eval_out = "-";
  std::size_t eval_threads = 1;
  evaluate_cmd->add_option("--hyp", eval_hyp, "Lines of {id, clues} or {id, output}")->required();
  evaluate_cmd->add_option("--ref", eval_ref, "Reference corpus");
  evaluate_cmd->add_option("-o,--out", eval_out);
  evaluate_cmd->add_option("-j,--threads", eval_threads);

  // adherence
  auto* adherence_cmd = app.add_subcommand("adherence", "Best-sentence ROUGE-L of clues against their context");
  std::string adh_in = "corpus.jsonl", adh_out = "-";
  std::size_t adh_sample = 0, adh_threads = 1, adh_buckets = 20;
  std::uint64_t adh_seed = 0;
  std::string adh_histogram;
  adherence_cmd->add_option("-i,--in,--data", adh_in);
  adherence_cmd->add_option("--histogram", adh_histogram, "buckets=N");
  adherence_cmd->add_option("-o,--out", adh_out);
  adherence_cmd->add_option("--sample", adh_sample, "Score a seeded sample of this many examples");
  adherence_cmd->add_option("--seed", adh_seed);
  adherence_cmd->add_option("--buckets", adh_buckets);
  adherence_cmd->add_option("-j,--threads", adh_threads);

  // assemble
  auto* assemble_cmd = app.add_subcommand("assemble", "Lay curated keyword/clue pairs out as a crossword");
  std::string asm_in, asm_out = "-", asm_layout, asm_format = "text", asm_view = "solution";
  AssembleConfig grid;
  long long budget_ms = grid.time_budget.count();
  assemble_cmd->add_option("-i,--in", asm_in, "Lines of {keyword, clue} or corpus rows")->required();
  assemble_cmd->add_option("--rows", grid.max_rows);
  assemble_cmd->add_option("--cols", grid.max_cols);
  assemble_cmd->add_option("--seed", grid.seed);
  assemble_cmd->add_option("--time-budget-ms", budget_ms);
  assemble_cmd->add_option("--node-budget", grid.node_budget);
  assemble_cmd->add_flag("--allow-adjacent", grid.allow_adjacent, "Permit incidental letter runs");
  assemble_cmd->add_option("--format", asm_format, "text, html or printable");
  assemble_cmd->add_option("--view", asm_view, "solution or blank");
  assemble_cmd->add_option("-o,--out", asm_out, "Rendered puzzle");
  assemble_cmd->add_option("--layout-out", asm_layout, "Layout JSON");

  // ratings
  auto* ratings = app.add_subcommand("ratings", "Rating ledger tools");
  ratings->require_subcommand(1);
  std::string ledger_path = "ratings.jsonl", ratings_out = "-", filter_annotator, filter_model;
  auto* ratings_export = ratings->add_subcommand("export", "Latest judgments as CSV");
  ratings_export->add_option("--ledger", ledger_path);
  ratings_export->add_option("-o,--out", ratings_out);
  bool export_all = false;
  ratings_export->add_flag("--all", export_all, "Every ledger line, superseded ones included");
  auto* ratings_summary = ratings->add_subcommand("summary", "Rating distribution and agreement");
  ratings_summary->add_option("--ledger", ledger_path);
  ratings_summary->add_option("--annotator", filter_annotator);
  ratings_summary->add_option("--model", filter_model);

  // serve
  auto* serve = app.add_subcommand("serve", "HTTP API and review UI");
  ServeConfig serve_cfg;
  serve_cfg.corpus = "corpus.jsonl";
  serve_cfg.ledger = "ratings.jsonl";
  std::string serve_corpus = serve_cfg.corpus.string(), serve_ledger = serve_cfg.ledger.string(), serve_ui;
  serve->add_option("--host", serve_cfg.host);
  serve->add_option("-p,--port", serve_cfg.port);
  serve->add_option("--corpus", serve_corpus);
  serve->add_option("--ledger", serve_ledger);
  serve->add_option("--ui", serve_ui, "Built review UI directory");

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "Run every stage from ingest to corpus");
  bool with_mock = false;
  double mock_malformed = 0.0, mock_leak = 0.0;
  pipeline->add_flag("--mock", with_mock, "Generate against an in-process mock endpoint");
  pipeline->add_option("--mock-malformed-rate", mock_malformed);
  pipeline->add_option("--mock-leak-rate", mock_leak);

  // import
  auto* import_cmd = app.add_subcommand("import", "Convert a published clue corpus to corpus rows");
  std::string import_in, import_out = "corpus.jsonl", import_mapping;
  import_cmd->add_option("-i,--in", import_in, "JSONL or JSON array")->required();
  import_cmd->add_option("-o,--out", import_out);
  import_cmd->add_option("--mapping", import_mapping, "JSON object of column names");

  // mock-llm
  auto* mock = app.add_subcommand("mock-llm", "Local chat-completions stand-in");
  MockLlmConfig mock_cfg;
  int mock_port = 8089;
  std::string mock_host = "127.0.0.1";
  mock->add_option("--host", mock_host);
  mock->add_option("-p,--port", mock_port);
  mock->add_option("--malformed-rate", mock_cfg.malformed_rate);
  mock->add_option("--leak-rate", mock_cfg.leak_rate);
  mock->add_option("--seed", mock_cfg.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const PipelineConfig cfg = resolve_config(config_path);

    if (*ingest) {
      PipelineConfig run = cfg;
      if (!fixtures.empty()) run.fixtures_dir = fixtures;
      if (ingest_live) run.source = SourceKind::Live;
      if (!ingest_categories.empty()) {
        run.categories.clear();
        for (const auto& c : ingest_categories) run.categories.push_back({c, "Category:" + c});
      }
      if (ingest_limit) run.limit_per_category = ingest_limit;
      if (run.categories.empty()) throw Error(Errc::EmptyConfig, "no categories configured");
      auto source = make_source(run);
      std::vector<std::pair<std::string, std::string>> titles;
      std::set<std::string> seen;
      for (const auto& cat : run.categories) {
        for (auto& t : source->list_category_pages(cat, run.limit_per_category)) {
          if (seen.insert(t).second) titles.emplace_back(t, cat.name);
        }
      }
      Output out(ingest_out);
      std::size_t ok = 0;
      for (const auto& r : fetch_pages(*source, titles, run.fetch_concurrency)) {
        if (r.page) {
          *out << nlohmann::json(*r.page).dump() << '\n';
          ++ok;
        } else {
          std::cerr << "skipped " << r.title << ": " << r.message << '\n';
        }
      }
      std::cerr << "fetched " << ok << " of " << titles.size() << " pages\n";
    } else if (*screen) {
      ScreenConfig sc = cfg.screen;
      if (min_views) sc.min_views = *min_views;
      if (required_importance) sc.required_importance = parse_importance(*required_importance);
      if (screen_rule == "all") sc.popularity_rule = PopularityRule::AllOf;
      if (screen_rule == "any") sc.popularity_rule = PopularityRule::AnyOf;
      if (min_context) sc.min_context_words = *min_context;
      if (max_context) sc.max_context_words = *max_context;
      if (max_kw_words) sc.max_keyword_words = *max_kw_words;
      if (min_kw_chars) sc.min_keyword_chars = *min_kw_chars;
      if (max_kw_chars) sc.max_keyword_chars = *max_kw_chars;
      if (ascii_only) sc.ascii_only = true;
      sc.validate();
      Output out(screen_out);
      std::optional<Output> report;
      if (!screen_report.empty()) report.emplace(screen_report);
      std::map<std::string, std::size_t> reasons;
      std::size_t accepted = 0, total = 0;
      for (const auto& row : read_lines(screen_in)) {
        const auto page = row.get<PageRecord>();
        const auto decision = screen_page(page, sc);
        ++total;
        if (report && !decision.accepted)
          **report << nlohmann::json{{"title", page.title}, {"reasons", nlohmann::json(decision).at("reasons")}}.dump()
                   << '\n';
        accepted += decision.accepted;
        for (auto r : decision.reasons) ++reasons[std::string(to_string(r))];
        *out << nlohmann::json{{"page", page}, {"decision", decision}}.dump() << '\n';
      }
      std::cerr << "accepted " << accepted << " of " << total;
      for (const auto& [k, v] : reasons) std::cerr << ", " << k << "=" << v;
      std::cerr << '\n';
    } else if (*generate) {
      GenParams params = cfg.gen;
      if (!gen_endpoint.empty()) params.endpoint = gen_endpoint;
      if (!gen_model.empty()) params.model_name = gen_model;
      params.validate();
      const auto tpl = resolve_template(gen_template, cfg);
      std::vector<nlohmann::json> accepted;
      std::vector<GenerationRequest> requests;
      for (auto& row : read_lines(gen_in)) {
        const auto decision = row.at("decision").get<ScreenDecision>();
        if (!decision.accepted) continue;
        const auto page = row.at("page").get<PageRecord>();
        requests.push_back({render_prompt(tpl, page.lead_text, *decision.kept_keyword, page.category).text,
                            *decision.kept_keyword});
        accepted.push_back(std::move(row));
      }
      HttpChatClient client;
      const auto results = generate_all(client, requests, params);
      Output out(gen_out);
      std::map<std::string, std::size_t> by_status;
      for (std::size_t i = 0; i < results.size(); ++i) {
        accepted[i]["result"] = results[i];
        ++by_status[std::string(to_string(results[i].status))];
        *out << accepted[i].dump() << '\n';
      }
      for (const auto& [k, v] : by_status) std::cerr << k << "=" << v << ' ';
      std::cerr << '\n';
    } else if (*build) {
      std::vector<std::string> names;
      for (const auto& c : cfg.categories) names.push_back(c.name);
      Corpus corpus;
      std::set<std::string> ids;
      std::size_t skipped = 0;
      for (const auto& row : read_lines(build_in)) {
        const auto clues = row.at("result").get<ClueSet>();
        if (clues.status != ClueStatus::Valid) {
          ++skipped;
          continue;
        }
        auto ex = build_example(row.at("page").get<PageRecord>(), row.at("decision").get<ScreenDecision>(), clues,
                                cfg.screen, names);
        if (ids.insert(ex.id).second) corpus.push_back(std::move(ex));
      }
      write_corpus(build_out, corpus);
      if (!build_manifest.empty()) {
        Manifest m{cfg.seed, config_hash(cfg), tool_version(), {{"rows_written", corpus.size()}, {"not_valid", skipped}}};
        write_manifest(build_manifest, m);
      }
      std::cerr << "wrote " << corpus.size() << " rows (" << skipped << " generations not Valid)\n";
    } else if (*stats_cmd) {
      Output out(stats_out);
      *out << to_json(stats(read_corpus(stats_in))).dump(2) << '\n';
    } else if (*split_cmd) {
      const auto seed = split_seed.value_or(cfg.seed);
      const auto parts = split(read_corpus(split_in), test_size, seed);
      write_corpus(train_out, parts.train);
      write_corpus(test_out, parts.test);
      std::cerr << "train " << parts.train.size() << ", test " << parts.test.size() << " (seed " << seed << ")\n";
    } else if (*truncate_cmd) {
      const auto subset = truncate_training(read_corpus(trunc_in), fraction, trunc_seed.value_or(cfg.seed));
      write_corpus(trunc_out, subset);
      std::cerr << "kept " << subset.size() << " rows\n";
    } else if (*export_cmd) {
      const auto tpl = resolve_template(export_template, cfg);
      Output out(export_out);
      for (const auto& ex : read_corpus(export_in)) *out << training_line(export_instruction_format(ex, tpl)) << '\n';
    } else if (*evaluate_cmd) {
      std::map<std::string, std::vector<std::string>> hyps;
      for (const auto& row : read_lines(eval_hyp)) {
        std::vector<std::string> clues;
        if (row.contains("clues")) {
          clues = parse_clue_field(row["clues"]);
        } else if (row.contains("output")) {
          clues = parse_clues(row["output"].get<std::string>()).clues;
        }
        hyps[row.at("id").get<std::string>()] = std::move(clues);
      }
      std::vector<metrics::EvalPair> pairs;
      for (const auto& ex : read_corpus(eval_ref)) {
        const auto it = hyps.find(ex.id);
        pairs.push_back({ex.id, it == hyps.end() ? std::vector<std::string>{} : it->second, ex.clues});
      }
      Output out(eval_out);
      *out << metrics::to_json(metrics::evaluate(pairs, eval_threads)).dump(2) << '\n';
    } else if (*adherence_cmd) {
      if (!adh_histogram.empty()) {
        const auto eq = adh_histogram.find('=');
        adh_buckets = std::stoul(eq == std::string::npos ? adh_histogram : adh_histogram.substr(eq + 1));
      }
      auto corpus = read_corpus(adh_in);
      if (adh_sample && adh_sample < corpus.size()) {
        std::mt19937_64 rng(adh_seed);
        stable_shuffle(corpus, rng);
        corpus.resize(adh_sample);
      }
      std::vector<metrics::AdherenceInput> inputs;
      for (const auto& ex : corpus) inputs.push_back({ex.id, ex.context, ex.clues});
      Output out(adh_out);
      *out << metrics::to_json(metrics::adherence_report(inputs, adh_buckets, adh_threads)).dump(2) << '\n';
    } else if (*assemble_cmd) {
      grid.time_budget = std::chrono::milliseconds(budget_ms);
      AssembleStats st;
      const auto layout = assemble(read_grid_entries(asm_in), grid, &st);
      if (!asm_layout.empty()) {
        std::ofstream(asm_layout, std::ios::binary | std::ios::trunc) << to_json(layout).dump(2) << '\n';
      }
      Output out(asm_out);
      *out << render(layout, parse_render_format(asm_format),
                     asm_view == "blank" ? RenderView::Blank : RenderView::Solution);
      std::cerr << "placed " << layout.placements.size() << ", unplaced " << layout.unplaced.size()
                << ", intersections " << layout.intersections() << " (" << st.nodes << " nodes"
                << (st.exhausted ? ", exhaustive" : "") << ")\n";
      for (const auto& u : layout.unplaced) std::cerr << "  unplaced " << u.entry.keyword << ": " << u.reason << '\n';
    } else if (*ratings_export) {
      const auto loaded = load_ledger(ledger_path);
      Output out(ratings_out);
      if (export_all) {
        export_csv(loaded.records, *out);
      } else {
        export_csv(latest_records(loaded.records), *out);
      }
      if (loaded.corrupt_lines) std::cerr << "skipped " << loaded.corrupt_lines << " corrupt ledger lines\n";
    } else if (*ratings_summary) {
      const auto latest = latest_records(load_ledger(ledger_path).records);
      SummaryFilter filter;
      if (!filter_annotator.empty()) filter.annotator = filter_annotator;
      if (!filter_model.empty()) filter.model = filter_model;
      auto body = to_json(summarize(latest, filter));
      nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
      for (const auto& a : agreement(latest)) pairs.push_back(to_json(a));
      body["agreement"] = pairs;
      std::cout << body.dump(2) << '\n';
    } else if (*serve) {
      serve_cfg.corpus = serve_corpus;
      serve_cfg.ledger = serve_ledger;
      serve_cfg.ui_dir = serve_ui;
      serve_cfg.grid.seed = cfg.seed;
      ReviewServer server(serve_cfg);
      server.start();
      std::cerr << "serving " << server.corpus().size() << " examples on " << server.base_url() << '\n';
      std::signal(SIGINT, [](int) { g_stop = 1; });
      std::signal(SIGTERM, [](int) { g_stop = 1; });
      while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
      server.stop();
    } else if (*pipeline) {
      PipelineConfig run = cfg;
      if (config_path.empty() && !std::getenv("EDUVERBA_CONFIG"))
        throw Error(Errc::InvalidConfig, "pipeline needs --config or EDUVERBA_CONFIG");
      std::unique_ptr<MockLlmServer> mock_server;
      if (with_mock) {
        MockLlmConfig mc;
        mc.malformed_rate = mock_malformed;
        mc.leak_rate = mock_leak;
        mc.seed = run.seed;
        mock_server = std::make_unique<MockLlmServer>(mc);
        mock_server->start();
        run.gen.endpoint = mock_server->endpoint();
      }
      HttpChatClient client;
      const auto manifest = run_pipeline(run, client);
      std::cout << to_json(manifest).dump(2) << '\n';
    } else if (*import_cmd) {
      ImportMapping mapping;
      if (!import_mapping.empty()) {
        const auto j = nlohmann::json::parse(import_mapping, nullptr, false);
        if (j.is_discarded() || !j.is_object()) throw Error(Errc::InvalidConfig, "--mapping must be a JSON object");
        mapping = j.get<ImportMapping>();
      }
      const auto corpus = import_published(import_in, mapping);
      write_corpus(import_out, corpus);
      std::cerr << "imported " << corpus.size() << " rows\n";
    } else if (*mock) {
      MockLlmServer server(mock_cfg);
      std::cerr << "mock chat endpoint on http://" << mock_host << ":" << mock_port << "/v1/chat/completions\n";
      server.run(mock_host, mock_port);
    }
  } catch (const Error& e) {
    std::cerr << "eduverba: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "eduverba: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
