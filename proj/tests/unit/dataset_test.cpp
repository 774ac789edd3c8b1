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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "eduverba/dataset.hpp"
#include "eduverba/ingest.hpp"
#include "test_support.hpp"

namespace eduverba {
namespace {

using testing::synthetic_corpus;

std::set<std::string> ids(const Corpus& c) {
  std::set<std::string> out;
  for (const auto& e : c) out.insert(e.id);
  return out;
}

ClueSet valid_clues() {
  ClueSet c;
  c.clues = {"Automated message delivered by phone", "Unwanted call from a machine", "Dialer that plays a recording"};
  c.status = ClueStatus::Valid;
  c.attempts = 1;
  return c;
}

PageRecord robocall() {
  FixtureSource src(testing::fixture_pages());
  src.set_configured_categories(default_categories());
  return src.fetch_page("Robocall");
}

TEST(BuildExample, RobocallInSociety) {
  const auto page = robocall();
  const auto decision = screen_page(page, {});
  std::vector<std::string> names;
  for (const auto& c : default_categories()) names.push_back(c.name);
  const auto e = build_example(page, decision, valid_clues(), {}, names);
  EXPECT_EQ(e.category, "Society");
  EXPECT_EQ(e.keyword, "Robocall");
  EXPECT_EQ(e.id, example_id(page.url, "Robocall"));
  EXPECT_TRUE(e.id.starts_with("ci-"));
  EXPECT_EQ(e.clues.size(), 3u);
  EXPECT_EQ(e.context, page.lead_text);
}

TEST(BuildExample, Preconditions) {
  const auto page = robocall();
  auto rejected = screen_page(page, {});
  rejected.accepted = false;
  rejected.reasons = {RejectReason::LowPopularity};
  auto malformed = valid_clues();
  malformed.status = ClueStatus::Malformed;
  for (const auto& [d, c] : {std::pair{rejected, valid_clues()}, std::pair{screen_page(page, {}), malformed}}) {
    try {
      build_example(page, d, c);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::InvariantViolation);
    }
  }
}

TEST(ExampleId, StableAndDistinct) {
  EXPECT_EQ(example_id("u", "k"), example_id("u", "k"));
  EXPECT_NE(example_id("u", "k"), example_id("u", "K"));
  EXPECT_NE(example_id("ab", "c"), example_id("a", "bc"));
  EXPECT_EQ(hex64(0xabcULL), "0000000000000abc");
  EXPECT_EQ(fnv1a64(""), 14695981039346656037ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
}

TEST(ValidateExample, NamesBrokenInvariant) {
  auto e = synthetic_corpus(1, 1).front();
  EXPECT_NO_THROW(validate_example(e, {}));
  auto two = e;
  two.clues.pop_back();
  EXPECT_THROW(validate_example(two, {}), Error);
  auto bad_cat = e;
  bad_cat.category = "Astrology";
  const std::vector<std::string> cats = {"Geography"};
  EXPECT_THROW(validate_example(bad_cat, {}, cats), Error);
  auto short_ctx = e;
  short_ctx.context = "too short";
  try {
    validate_example(short_ctx, {});
    FAIL();
  } catch (const Error& err) {
    EXPECT_NE(std::string(err.what()).find("context"), std::string::npos);
  }
}

TEST(Persistence, RoundTrip) {
  testing::TempDir dir;
  auto corpus = synthetic_corpus(200, 3);
  corpus[5].context += " with \"quotes\", caf\xC3\xA9 and a\nnewline";
  write_corpus(dir / "c.jsonl", corpus);
  EXPECT_EQ(read_corpus(dir / "c.jsonl"), corpus);
  const auto first = testing::read_file(dir / "c.jsonl");
  EXPECT_EQ(first.substr(0, first.find('\n')), corpus_line(corpus[0]));
  EXPECT_EQ(std::count(first.begin(), first.end(), '\n'), 200);
}

TEST(Persistence, UnreadableCorpus) {
  testing::TempDir dir;
  EXPECT_THROW(read_corpus(dir / "missing.jsonl"), Error);
  testing::write_file(dir / "bad.jsonl", "{not json}\n");
  try {
    read_corpus(dir / "bad.jsonl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::CorpusUnreadable);
  }
}

TEST(Split, ExamplesAndDeterminism) {
  const auto corpus = synthetic_corpus(3000, 5);
  const auto a = split(corpus, 600, 42);
  EXPECT_EQ(a.test.size(), 600u);
  EXPECT_EQ(a.train.size(), 2400u);
  const auto b = split(corpus, 600, 42);
  EXPECT_EQ(ids(a.test), ids(b.test));
  EXPECT_NE(ids(split(corpus, 600, 43).test), ids(a.test));

  const auto none = split(corpus, 0, 1);
  EXPECT_TRUE(none.test.empty());
  EXPECT_EQ(none.train, corpus);
  try {
    split(corpus, 3001, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::TestTooLarge);
  }
}

TEST(Split, DisjointExhaustiveStratified) {
  const auto corpus = synthetic_corpus(5000, 6);
  for (std::size_t test_size : {1u, 37u, 600u, 4999u}) {
    const auto s = split(corpus, test_size, 9);
    const auto tr = ids(s.train), te = ids(s.test);
    std::vector<std::string> both;
    std::set_intersection(tr.begin(), tr.end(), te.begin(), te.end(), std::back_inserter(both));
    EXPECT_TRUE(both.empty());
    EXPECT_EQ(tr.size() + te.size(), corpus.size());
    std::map<std::string, std::size_t> all, test;
    for (const auto& e : corpus) ++all[e.category];
    for (const auto& e : s.test) ++test[e.category];
    for (const auto& [cat, n] : all) {
      const double share = static_cast<double>(test_size) * static_cast<double>(n) / static_cast<double>(corpus.size());
      EXPECT_LT(std::abs(static_cast<double>(test[cat]) - share), 1.0) << cat << " at " << test_size;
    }
  }
}

TEST(Split, KeepsCorpusOrderAndIgnoresInputOrder) {
  auto corpus = synthetic_corpus(1000, 8);
  const auto s = split(corpus, 100, 4);
  for (std::size_t i = 1; i < s.train.size(); ++i) {
    const auto pos = [&](const std::string& id) {
      return std::find_if(corpus.begin(), corpus.end(), [&](const auto& e) { return e.id == id; }) - corpus.begin();
    };
    ASSERT_LT(pos(s.train[i - 1].id), pos(s.train[i].id));
    if (i > 50) break;
  }
  auto reversed = corpus;
  std::reverse(reversed.begin(), reversed.end());
  EXPECT_EQ(ids(split(reversed, 100, 4).test), ids(s.test));
}

TEST(Truncate, SizesAndNesting) {
  const auto train = synthetic_corpus(43475, 2);
  EXPECT_EQ(truncate_training(train, 1.0, 3), train);
  const auto one = truncate_training(train, 0.01, 3);
  const auto ten = truncate_training(train, 0.10, 3);
  EXPECT_EQ(one.size(), 435u);
  EXPECT_EQ(ten.size(), 4348u);
  const auto s1 = ids(one), s10 = ids(ten);
  EXPECT_TRUE(std::includes(s10.begin(), s10.end(), s1.begin(), s1.end()));
  EXPECT_NE(ids(truncate_training(train, 0.01, 4)), s1);
  EXPECT_THROW(truncate_training(train, 0.0, 1), Error);
  EXPECT_THROW(truncate_training(train, 1.5, 1), Error);
}

TEST(Histogram, BucketsAndEdges) {
  Histogram h({0, 10, 20});
  for (double v : {-5.0, 0.0, 9.99, 10.0, 19.0, 20.0, 1e9}) h.add(v);
  EXPECT_EQ(h.counts, (std::vector<std::size_t>{3, 2, 2}));
  EXPECT_EQ(h.total(), 7u);
  EXPECT_THROW(Histogram({1, 1}), Error);
}

TEST(Stats, EmptyCorpus) {
  const auto s = stats({});
  EXPECT_EQ(s.n_examples, 0u);
  EXPECT_EQ(s.n_clues, 0u);
  EXPECT_EQ(s.n_categories, 0u);
  EXPECT_TRUE(s.category_histogram.empty());
  EXPECT_EQ(s.context_word_hist.total(), 0u);
}

TEST(Stats, ThreeRowCategoryHistogram) {
  auto c = synthetic_corpus(3, 1);
  c[0].category = "A";
  c[1].category = "A";
  c[2].category = "B";
  const auto s = stats(c);
  EXPECT_EQ(s.category_histogram, (std::map<std::string, std::size_t>{{"A", 2}, {"B", 1}}));
  EXPECT_EQ(s.n_categories, 2u);
}

TEST(Stats, TotalsMatchCounts) {
  const auto c = synthetic_corpus(2500, 12);
  const auto s = stats(c);
  EXPECT_EQ(s.n_clues, 3 * s.n_examples);
  EXPECT_EQ(s.context_word_hist.total(), s.n_examples);
  EXPECT_EQ(s.keyword_char_hist.total(), s.n_examples);
  EXPECT_EQ(s.output_word_hist.total(), s.n_examples);
  EXPECT_EQ(s.clue_word_hist.total(), s.n_clues);
  EXPECT_EQ(s.n_categories, 20u);
  const auto j = to_json(s);
  EXPECT_EQ(j["n_examples"], 2500);
}

TEST(Export, RoundTripsThroughParser) {
  const auto corpus = synthetic_corpus(100, 14);
  const auto tpl = PromptTemplate::default_template();
  testing::TempDir dir;
  std::string first;
  for (const auto& e : corpus) {
    const auto rec = export_instruction_format(e, tpl);
    EXPECT_EQ(parse_clues(rec.target).clues, e.clues);
    EXPECT_NE(rec.input.find(e.context), std::string::npos);
    first += training_line(rec) + "\n";
  }
  EXPECT_EQ(std::count(first.begin(), first.end(), '\n'), 100);

  // Re-import the exported file and export again: byte-identical.
  write_corpus(dir / "c.jsonl", corpus);
  const auto again = read_corpus(dir / "c.jsonl");
  std::string second;
  for (const auto& e : again) second += training_line(export_instruction_format(e, tpl)) + "\n";
  EXPECT_EQ(first, second);
}

TEST(Import, ClueFieldShapes) {
  const std::vector<std::string> three = {"First one", "Second one", "Third one"};
  EXPECT_EQ(parse_clue_field(nlohmann::json(three)), three);
  EXPECT_EQ(parse_clue_field(nlohmann::json(nlohmann::json(three).dump())), three);
  EXPECT_EQ(parse_clue_field(R"(Sure: {"clues": ["First one", "Second one", "Third one"]})"), three);
  EXPECT_EQ(parse_clue_field("1. First one\n2) Second one\n- Third one\n"), three);
  EXPECT_EQ(parse_clue_field("Clue 1: First one\nClue 2: Second one\nClue 3: Third one"), three);
  EXPECT_TRUE(parse_clue_field(nlohmann::json(7)).empty());
}

TEST(Import, MappedColumnsAndDerivedIds) {
  testing::TempDir dir;
  const std::string ctx = testing::synthetic_corpus(1, 1).front().context;
  nlohmann::json row = {{"text", ctx}, {"answer", "Bavabi"}, {"topic", "Science"},
                        {"output", "1. Alpha clue\n2. Beta clue\n3. Gamma clue"}, {"link", "https://x/y"}};
  testing::write_file(dir / "pub.jsonl", row.dump() + "\n" + row.dump() + "\n");
  testing::write_file(dir / "pub.json", nlohmann::json::array({row}).dump());
  ImportMapping m = nlohmann::json{{"context", "text"}, {"keyword", "answer"}, {"category", "topic"},
                                   {"clues", "output"}, {"source_url", "link"}}
                        .get<ImportMapping>();
  const auto lines = import_published(dir / "pub.jsonl", m);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0].id, example_id("https://x/y", "Bavabi"));
  EXPECT_EQ(lines[0].clues, (std::vector<std::string>{"Alpha clue", "Beta clue", "Gamma clue"}));
  EXPECT_EQ(lines[0].category, "Science");
  EXPECT_EQ(import_published(dir / "pub.json", m), std::vector<ClueInstructExample>{lines[0]});
}

TEST(Manifest, Serialization) {
  testing::TempDir dir;
  Manifest m;
  m.seed = 7;
  m.config_hash = "abc";
  m.tool_version = tool_version();
  m.counts["rows_written"] = 3;
  write_manifest(dir / "m.json", m);
  const auto j = nlohmann::json::parse(testing::read_file(dir / "m.json"));
  EXPECT_EQ(j["seed"], 7);
  EXPECT_EQ(j["counts"]["rows_written"], 3);
  EXPECT_FALSE(tool_version().empty());
}

TEST(Rng, UniformIndexInRangeAndPortable) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(uniform_index(rng, 7), 7u);
  std::mt19937_64 a(99), b(99);
  std::vector<int> x(50), y(50);
  std::iota(x.begin(), x.end(), 0);
  y = x;
  stable_shuffle(x, a);
  stable_shuffle(y, b);
  EXPECT_EQ(x, y);
}

}  // namespace
}  // namespace eduverba
