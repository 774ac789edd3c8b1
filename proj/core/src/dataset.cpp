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

#include "eduverba/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "eduverba/text.hpp"

namespace eduverba {

void to_json(nlohmann::ordered_json& j, const ClueInstructExample& e) {
  j = nlohmann::ordered_json{{"id", e.id},           {"context", e.context}, {"keyword", e.keyword},
                             {"category", e.category}, {"clues", e.clues},     {"source_url", e.source_url}};
}

void from_json(const nlohmann::ordered_json& j, ClueInstructExample& e) {
  try {
    e.id = j.at("id").get<std::string>();
    e.context = j.at("context").get<std::string>();
    e.keyword = j.at("keyword").get<std::string>();
    e.category = j.at("category").get<std::string>();
    e.clues = j.at("clues").get<std::vector<std::string>>();
    e.source_url = j.value("source_url", "");
  } catch (const nlohmann::json::exception& ex) {
    throw Error(Errc::MalformedRecord, ex.what());
  }
}

void to_json(nlohmann::json& j, const ClueInstructExample& e) {
  nlohmann::ordered_json o;
  to_json(o, e);
  j = nlohmann::json::parse(o.dump());
}

void from_json(const nlohmann::json& j, ClueInstructExample& e) {
  from_json(nlohmann::ordered_json::parse(j.dump()), e);
}

std::uint64_t fnv1a64(std::string_view data, std::uint64_t h) {
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) out[i] = kHex[v & 15];
  return out;
}

std::string example_id(std::string_view url, std::string_view keyword) {
  std::string key(url);
  key.push_back('\x1f');
  key.append(keyword);
  return "ci-" + hex64(fnv1a64(key));
}

void validate_example(const ClueInstructExample& e, const ScreenConfig& cfg, std::span<const std::string> categories) {
  auto fail = [&](const std::string& what) { throw Error(Errc::InvariantViolation, what + " (example '" + e.id + "')"); };
  if (e.id.empty()) fail("id is empty");
  if (!keyword_ok(e.keyword, cfg).pass) fail("keyword '" + e.keyword + "' fails keyword_ok");
  const std::size_t words = text::word_count(e.context);
  if (words < cfg.min_context_words || words > cfg.max_context_words)
    fail("context word count " + std::to_string(words) + " outside screen bounds");
  if (e.clues.size() != 3) fail("expected exactly 3 clues, got " + std::to_string(e.clues.size()));
  for (const auto& c : e.clues) {
    if (text::trim(c).empty()) fail("empty clue");
  }
  if (!categories.empty() && std::find(categories.begin(), categories.end(), e.category) == categories.end())
    fail("category '" + e.category + "' not configured");
}

ClueInstructExample build_example(const PageRecord& page, const ScreenDecision& decision, const ClueSet& clues,
                                  const ScreenConfig& cfg, std::span<const std::string> categories) {
  if (!decision.accepted) throw Error(Errc::InvariantViolation, "screen decision for '" + page.title + "' is a rejection");
  if (!decision.kept_keyword) throw Error(Errc::InvariantViolation, "accepted decision without kept_keyword");
  if (clues.status != ClueStatus::Valid)
    throw Error(Errc::InvariantViolation, "clue set for '" + page.title + "' is " + std::string(to_string(clues.status)));
  ClueInstructExample e;
  e.id = example_id(page.url, *decision.kept_keyword);
  e.context = page.lead_text;
  e.keyword = *decision.kept_keyword;
  e.category = page.category;
  e.clues = clues.clues;
  e.source_url = page.url;
  validate_example(e, cfg, categories);
  return e;
}

std::string corpus_line(const ClueInstructExample& e) {
  nlohmann::ordered_json j;
  to_json(j, e);
  return j.dump();
}

Corpus read_corpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::CorpusUnreadable, "cannot open corpus '" + path.string() + "'");
  Corpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    const auto j = nlohmann::ordered_json::parse(line, nullptr, false);
    if (j.is_discarded())
      throw Error(Errc::CorpusUnreadable, path.string() + ":" + std::to_string(line_no) + ": not a JSON record");
    ClueInstructExample e;
    from_json(j, e);
    corpus.push_back(std::move(e));
  }
  return corpus;
}

void write_corpus(const std::filesystem::path& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::CorpusUnreadable, "cannot write corpus '" + path.string() + "'");
  for (const auto& e : corpus) out << corpus_line(e) << '\n';
}

std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  if (n <= 1) return 0;
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

namespace {

// Indices ordered by id (then position) so the permutation does not depend
// on how the corpus file happened to be ordered.
std::vector<std::size_t> id_order(const Corpus& corpus, std::vector<std::size_t> indices) {
  std::stable_sort(indices.begin(), indices.end(),
                   [&](std::size_t a, std::size_t b) { return corpus[a].id < corpus[b].id; });
  return indices;
}

}  // namespace

SplitResult split(const Corpus& corpus, std::size_t test_size, std::uint64_t seed) {
  const std::size_t n = corpus.size();
  if (test_size > n)
    throw Error(Errc::TestTooLarge, "test_size " + std::to_string(test_size) + " exceeds corpus size " + std::to_string(n));

  std::map<std::string, std::vector<std::size_t>> by_category;
  for (std::size_t i = 0; i < n; ++i) by_category[corpus[i].category].push_back(i);

  struct Quota {
    std::string category;
    std::size_t take;
    std::size_t remainder;  // numerator of the fractional part, over n
  };
  std::vector<Quota> quotas;
  std::size_t assigned = 0;
  for (const auto& [cat, rows] : by_category) {
    const std::size_t exact_num = test_size * rows.size();
    quotas.push_back({cat, n ? exact_num / n : 0, n ? exact_num % n : 0});
    assigned += quotas.back().take;
  }
  std::vector<std::size_t> order(quotas.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return quotas[a].remainder > quotas[b].remainder; });
  for (std::size_t k = 0; assigned < test_size; ++k, ++assigned) ++quotas[order[k]].take;

  std::mt19937_64 rng(seed);
  std::vector<char> in_test(n, 0);
  for (const auto& q : quotas) {
    auto rows = id_order(corpus, by_category.at(q.category));
    stable_shuffle(rows, rng);
    for (std::size_t k = 0; k < q.take; ++k) in_test[rows[k]] = 1;
  }

  SplitResult out;
  out.test.reserve(test_size);
  out.train.reserve(n - test_size);
  for (std::size_t i = 0; i < n; ++i) (in_test[i] ? out.test : out.train).push_back(corpus[i]);
  return out;
}

Corpus truncate_training(const Corpus& train, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw Error(Errc::InvalidConfig, "fraction must be in (0,1]");
  const auto keep = std::min<std::size_t>(
      train.size(), static_cast<std::size_t>(std::floor(fraction * static_cast<double>(train.size()) + 0.5)));
  std::vector<std::size_t> all(train.size());
  std::iota(all.begin(), all.end(), 0);
  auto perm = id_order(train, std::move(all));
  std::mt19937_64 rng(seed);
  stable_shuffle(perm, rng);
  std::vector<char> chosen(train.size(), 0);
  for (std::size_t k = 0; k < keep; ++k) chosen[perm[k]] = 1;
  Corpus out;
  out.reserve(keep);
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (chosen[i]) out.push_back(train[i]);
  }
  return out;
}

Histogram::Histogram(std::vector<double> bucket_edges) : edges(std::move(bucket_edges)), counts(edges.size(), 0) {
  if (!std::is_sorted(edges.begin(), edges.end()) || std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    throw Error(Errc::InvalidConfig, "histogram edges must be strictly increasing");
}

void Histogram::add(double value) {
  if (counts.empty()) return;
  const auto it = std::upper_bound(edges.begin(), edges.end(), value);
  const std::size_t bucket = it == edges.begin() ? 0 : static_cast<std::size_t>(it - edges.begin()) - 1;
  ++counts[bucket];
}

std::size_t Histogram::total() const { return std::accumulate(counts.begin(), counts.end(), std::size_t{0}); }

DatasetStats stats(const Corpus& corpus, const HistogramEdges& edges) {
  DatasetStats s;
  s.context_word_hist = Histogram(edges.context_words);
  s.clue_word_hist = Histogram(edges.clue_words);
  s.output_word_hist = Histogram(edges.output_words);
  s.keyword_char_hist = Histogram(edges.keyword_chars);
  for (const auto& e : corpus) {
    ++s.n_examples;
    s.n_clues += e.clues.size();
    ++s.category_histogram[e.category];
    s.context_word_hist.add(static_cast<double>(text::word_count(e.context)));
    std::size_t output_words = 0;
    for (const auto& c : e.clues) {
      const std::size_t w = text::word_count(c);
      output_words += w;
      s.clue_word_hist.add(static_cast<double>(w));
    }
    s.output_word_hist.add(static_cast<double>(output_words));
    s.keyword_char_hist.add(static_cast<double>(text::letter_count(e.keyword)));
  }
  s.n_categories = s.category_histogram.size();
  return s;
}

namespace {

nlohmann::ordered_json histogram_json(const Histogram& h) {
  nlohmann::ordered_json buckets = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < h.counts.size(); ++i) {
    nlohmann::ordered_json b = {{"lo", h.edges[i]}};
    b["hi"] = i + 1 < h.edges.size() ? nlohmann::ordered_json(h.edges[i + 1]) : nlohmann::ordered_json(nullptr);
    b["count"] = h.counts[i];
    buckets.push_back(std::move(b));
  }
  return buckets;
}

}  // namespace

nlohmann::ordered_json to_json(const DatasetStats& s) {
  nlohmann::ordered_json cats = nlohmann::ordered_json::object();
  for (const auto& [c, n] : s.category_histogram) cats[c] = n;
  return {{"n_examples", s.n_examples},
          {"n_clues", s.n_clues},
          {"n_categories", s.n_categories},
          {"category_histogram", cats},
          {"context_word_hist", histogram_json(s.context_word_hist)},
          {"clue_word_hist", histogram_json(s.clue_word_hist)},
          {"output_word_hist", histogram_json(s.output_word_hist)},
          {"keyword_char_hist", histogram_json(s.keyword_char_hist)}};
}

TrainingRecord export_instruction_format(const ClueInstructExample& e, const PromptTemplate& tpl) {
  return TrainingRecord{e.id, render_prompt(tpl, e.context, e.keyword, e.category).text, serialize_clues(e.clues)};
}

std::string training_line(const TrainingRecord& r) {
  return nlohmann::ordered_json{{"id", r.id}, {"input", r.input}, {"target", r.target}}.dump();
}

void from_json(const nlohmann::json& j, ImportMapping& m) {
  m.id = j.value("id", m.id);
  m.context = j.value("context", m.context);
  m.keyword = j.value("keyword", m.keyword);
  m.category = j.value("category", m.category);
  m.clues = j.value("clues", m.clues);
  m.source_url = j.value("source_url", m.source_url);
}

std::vector<std::string> parse_clue_field(const nlohmann::json& value) {
  if (value.is_array()) {
    std::vector<std::string> out;
    for (const auto& v : value) {
      if (v.is_string()) out.push_back(std::string(text::trim(v.get<std::string>())));
    }
    return out;
  }
  if (value.is_object() && value.contains("clues")) return parse_clue_field(value["clues"]);
  if (!value.is_string()) return {};
  const std::string s = value.get<std::string>();
  const auto nested = nlohmann::json::parse(s, nullptr, false);
  if (!nested.is_discarded() && (nested.is_array() || nested.is_object())) return parse_clue_field(nested);
  const auto embedded = parse_clues(s, 3);
  if (embedded.ok()) return embedded.clues;

  std::vector<std::string> out;
  std::istringstream lines(s);
  for (std::string line; std::getline(lines, line);) {
    std::string_view l = text::trim(line);
    // "1.", "2)", "-", "*", "Clue 3:" prefixes
    if (l.size() > 5 && text::iequals(l.substr(0, 4), "clue")) {
      std::size_t k = 4;
      while (k < l.size() && (l[k] == ' ' || std::isdigit(static_cast<unsigned char>(l[k])))) ++k;
      if (k < l.size() && (l[k] == ':' || l[k] == '.')) l.remove_prefix(k + 1);
    }
    std::size_t k = 0;
    while (k < l.size() && std::isdigit(static_cast<unsigned char>(l[k]))) ++k;
    if (k > 0 && k < l.size() && (l[k] == '.' || l[k] == ')')) l.remove_prefix(k + 1);
    if (!l.empty() && (l.front() == '-' || l.front() == '*')) l.remove_prefix(1);
    l = text::trim(l);
    if (!l.empty()) out.emplace_back(l);
  }
  return out;
}

Corpus import_published(const std::filesystem::path& path, const ImportMapping& m) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::CorpusUnreadable, "cannot open '" + path.string() + "'");
  std::vector<nlohmann::json> rows;
  const int first = in.peek();
  if (first == '[') {
    nlohmann::json all = nlohmann::json::parse(in, nullptr, false);
    if (all.is_discarded() || !all.is_array()) throw Error(Errc::CorpusUnreadable, path.string() + ": bad JSON array");
    for (auto& r : all) rows.push_back(std::move(r));
  } else {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (text::trim(line).empty()) continue;
      auto j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object())
        throw Error(Errc::CorpusUnreadable, path.string() + ":" + std::to_string(line_no) + ": not a JSON object");
      rows.push_back(std::move(j));
    }
  }

  auto field = [](const nlohmann::json& row, const std::string& column) -> std::string {
    if (column.empty() || !row.contains(column) || row[column].is_null()) return {};
    const auto& v = row[column];
    return v.is_string() ? v.get<std::string>() : v.dump();
  };

  Corpus corpus;
  corpus.reserve(rows.size());
  std::set<std::string> seen_ids;
  for (const auto& row : rows) {
    ClueInstructExample e;
    e.context = field(row, m.context);
    e.keyword = std::string(text::trim(field(row, m.keyword)));
    e.category = field(row, m.category);
    e.source_url = field(row, m.source_url);
    if (row.contains(m.clues)) e.clues = parse_clue_field(row[m.clues]);
    e.id = field(row, m.id);
    if (e.id.empty()) e.id = example_id(e.source_url.empty() ? e.context : e.source_url, e.keyword);
    std::string unique = e.id;
    for (int k = 2; seen_ids.count(unique); ++k) unique = e.id + "-" + std::to_string(k);
    e.id = unique;
    seen_ids.insert(e.id);
    corpus.push_back(std::move(e));
  }
  return corpus;
}

std::string tool_version() {
#ifdef EDUVERBA_VERSION_STRING
  return EDUVERBA_VERSION_STRING;
#else
  return "dev";
#endif
}

nlohmann::ordered_json to_json(const Manifest& m) {
  return {{"seed", m.seed}, {"config_hash", m.config_hash}, {"tool_version", m.tool_version}, {"counts", m.counts}};
}

void write_manifest(const std::filesystem::path& path, const Manifest& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::CorpusUnreadable, "cannot write manifest '" + path.string() + "'");
  out << to_json(m).dump(2) << '\n';
}

}  // namespace eduverba
