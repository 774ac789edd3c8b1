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

#include <random>

#include "eduverba/grid.hpp"
#include "test_support.hpp"

namespace eduverba {
namespace {

std::vector<GridEntry> entries_of(const std::vector<std::string>& words) {
  std::vector<GridEntry> out;
  for (const auto& w : words) out.push_back({w, "Clue for " + w, ""});
  return out;
}

TEST(NormalizeAnswer, Examples) {
  EXPECT_EQ(normalize_answer("South American tapir"), "SOUTHAMERICANTAPIR");
  EXPECT_EQ(normalize_answer("Robocall"), "ROBOCALL");
  try {
    normalize_answer("COVID-19");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NonAlphabetic);
  }
}

TEST(Assemble, SingleWord) {
  const auto layout = assemble(entries_of({"Robocall"}));
  EXPECT_EQ(layout.rows, 1);
  EXPECT_EQ(layout.cols, 8);
  ASSERT_EQ(layout.placements.size(), 1u);
  EXPECT_EQ(layout.placements[0].row, 0);
  EXPECT_EQ(layout.placements[0].col, 0);
  EXPECT_EQ(layout.placements[0].direction, Direction::Across);
  EXPECT_EQ(layout.placements[0].number, 1);
  EXPECT_EQ(layout.placements[0].word, "ROBOCALL");
}

TEST(Assemble, CatTarOneIntersection) {
  const auto layout = assemble(entries_of({"CAT", "TAR"}));
  EXPECT_EQ(layout.placements.size(), 2u);
  EXPECT_EQ(layout.intersections(), 1);
  EXPECT_TRUE(validate(layout).ok);
  const auto oracle = testing::exhaustive_grid_optimum({"CAT", "TAR"}, 15, 15);
  EXPECT_EQ(oracle.words, 2);
  EXPECT_EQ(oracle.crossings, 1);
}

TEST(Assemble, Errors) {
  try {
    assemble(std::vector<GridEntry>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NoEntries);
  }
  AssembleConfig small;
  small.max_rows = 5;
  small.max_cols = 5;
  try {
    assemble(entries_of({"Volcano"}), small);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::WordTooLong);
  }
}

TEST(Assemble, ShortAndUnplaceableWordsAreReported) {
  const auto layout = assemble(entries_of({"Ox", "Cat", "Qqq"}));
  ASSERT_EQ(layout.placements.size(), 1u);
  ASSERT_EQ(layout.unplaced.size(), 2u);
  EXPECT_EQ(layout.unplaced[0].entry.keyword, "Ox");
  EXPECT_FALSE(layout.unplaced[1].reason.empty());
}

TEST(Assemble, LongAxisRoot) {
  AssembleConfig tall;
  tall.max_rows = 8;
  tall.max_cols = 3;
  const auto layout = assemble(entries_of({"Robocall"}), tall);
  ASSERT_EQ(layout.placements.size(), 1u);
  EXPECT_EQ(layout.placements[0].direction, Direction::Down);
  EXPECT_EQ(layout.rows, 8);
}

TEST(Assemble, MatchesExhaustiveOptimumOnFourWordFuzz) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto words = testing::fuzz_grid_words(seed);
    std::mt19937_64 rng(seed);
    AssembleConfig cfg;
    cfg.max_rows = 6 + static_cast<int>(rng() % 4);
    cfg.max_cols = 6 + static_cast<int>(rng() % 4);
    cfg.seed = seed;
    AssembleStats stats;
    const auto layout = assemble(entries_of(words), cfg, &stats);
    const auto report = validate(layout);
    ASSERT_TRUE(report.ok) << seed << ": " << (report.problems.empty() ? "" : report.problems[0]);
    EXPECT_LE(layout.rows, cfg.max_rows);
    EXPECT_LE(layout.cols, cfg.max_cols);
    EXPECT_TRUE(stats.exhausted) << seed;
    const auto oracle = testing::exhaustive_grid_optimum(words, cfg.max_rows, cfg.max_cols);
    ASSERT_EQ(static_cast<int>(layout.placements.size()), oracle.words) << seed;
    EXPECT_EQ(layout.intersections(), oracle.crossings) << seed;
  }
}

TEST(Assemble, ValidOnLargerFuzz) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto words = testing::fuzz_grid_words(1000 + seed, 5 + seed % 8);
    AssembleConfig cfg;
    cfg.seed = seed;
    cfg.node_budget = 20000;
    const auto layout = assemble(entries_of(words), cfg);
    EXPECT_TRUE(validate(layout).ok) << seed;
    EXPECT_EQ(layout.placements.size() + layout.unplaced.size(), words.size());
  }
}

TEST(Assemble, GeographyQuality) {
  AssembleStats stats;
  const auto start = std::chrono::steady_clock::now();
  const auto layout = assemble(testing::geography_entries(), {}, &stats);
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(5));
  EXPECT_TRUE(validate(layout).ok);
  EXPECT_GE(layout.placements.size(), 6u);
  EXPECT_GE(layout.intersections(), 5);
  EXPECT_LE(layout.rows, 15);
  EXPECT_LE(layout.cols, 15);
}

TEST(Assemble, DeterministicForSeed) {
  AssembleConfig cfg;
  cfg.seed = 7;
  const auto a = to_json(assemble(testing::geography_entries(), cfg)).dump(2);
  const auto b = to_json(assemble(testing::geography_entries(), cfg)).dump(2);
  EXPECT_EQ(a, b);
}

TEST(Assemble, AllowAdjacentNeverPlacesFewer) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto words = testing::fuzz_grid_words(seed + 77, 4);
    AssembleConfig strict_cfg, loose_cfg;
    strict_cfg.max_rows = strict_cfg.max_cols = loose_cfg.max_rows = loose_cfg.max_cols = 7;
    loose_cfg.allow_adjacent = true;
    const auto loose = assemble(entries_of(words), loose_cfg);
    EXPECT_GE(loose.placements.size(), assemble(entries_of(words), strict_cfg).placements.size());
    EXPECT_TRUE(validate(loose, false).ok);
  }
}

TEST(Validate, DetectsProblems) {
  CrosswordLayout bad;
  bad.rows = 3;
  bad.cols = 3;
  bad.placements = {{"CAT", "Cat", "", "", 0, 0, Direction::Across, 0},
                    {"DOG", "Dog", "", "", 0, 0, Direction::Down, 0}};
  EXPECT_FALSE(validate(bad).ok);  // C vs D
  CrosswordLayout adjacent;
  adjacent.rows = 2;
  adjacent.cols = 3;
  adjacent.placements = {{"CAT", "Cat", "", "", 0, 0, Direction::Across, 0},
                         {"DOG", "Dog", "", "", 1, 0, Direction::Across, 0}};
  const auto rep = validate(adjacent);
  EXPECT_FALSE(rep.ok);
  EXPECT_GE(rep.problems.size(), 2u);  // incidental runs and disconnected
  CrosswordLayout out_of_bounds;
  out_of_bounds.rows = 1;
  out_of_bounds.cols = 2;
  out_of_bounds.placements = {{"CAT", "Cat", "", "", 0, 0, Direction::Across, 0}};
  EXPECT_FALSE(validate(out_of_bounds).ok);
}

TEST(Numbering, SingleAcross) {
  auto layout = assemble(entries_of({"Robocall"}));
  const auto n = number_cells(layout);
  ASSERT_EQ(n.across.size(), 1u);
  EXPECT_EQ(n.across[0].number, 1);
  EXPECT_TRUE(n.down.empty());
}

TEST(Numbering, RowMajorAndSharedStart) {
  CrosswordLayout two;
  two.rows = 3;
  two.cols = 3;
  two.placements = {{"CAT", "Cat", "feline", "", 0, 0, Direction::Across, 0},
                    {"ART", "Art", "craft", "", 0, 1, Direction::Down, 0}};
  auto n = number_cells(two);
  EXPECT_EQ(two.placements[0].number, 1);
  EXPECT_EQ(two.placements[1].number, 2);
  EXPECT_EQ(n.numbers[0][0], 1);
  EXPECT_EQ(n.numbers[0][1], 2);

  CrosswordLayout same;
  same.rows = 3;
  same.cols = 3;
  same.placements = {{"CAT", "Cat", "feline", "", 0, 0, Direction::Across, 0},
                     {"CAR", "Car", "vehicle", "", 0, 0, Direction::Down, 0}};
  n = number_cells(same);
  EXPECT_EQ(same.placements[0].number, 1);
  EXPECT_EQ(same.placements[1].number, 1);
  ASSERT_EQ(n.across.size(), 1u);
  ASSERT_EQ(n.down.size(), 1u);
  EXPECT_EQ(n.down[0].clue, "vehicle");
}

TEST(Render, TextViews) {
  const auto one = assemble(entries_of({"Robocall"}));
  EXPECT_EQ(render(one, RenderFormat::Text), "ROBOCALL\n");
  const auto geo = assemble(testing::geography_entries());
  const auto blank = render(geo, RenderFormat::Text, RenderView::Blank);
  EXPECT_EQ(std::count_if(blank.begin(), blank.end(), [](char c) { return std::isalpha(static_cast<unsigned char>(c)); }),
            0);
  EXPECT_EQ(parse_text_grid(render(geo, RenderFormat::Text)), geo.cell_letters());
}

TEST(Render, HtmlAndPrintableCarryNumbersAndClues) {
  const auto geo = assemble(testing::geography_entries());
  for (auto fmt : {RenderFormat::Html, RenderFormat::Printable}) {
    const auto doc = render(geo, fmt);
    EXPECT_NE(doc.find("<table"), std::string::npos);
    for (const auto& p : geo.placements) EXPECT_NE(doc.find(p.clue), std::string::npos) << p.clue;
    EXPECT_NE(doc.find("Across"), std::string::npos);
    EXPECT_NE(doc.find("Down"), std::string::npos);
  }
  EXPECT_EQ(parse_render_format("printable"), RenderFormat::Printable);
  EXPECT_THROW(parse_render_format("pdf"), Error);
  const auto blank_html = render(geo, RenderFormat::Html, RenderView::Blank);
  EXPECT_EQ(blank_html.find("class=\"letter\""), std::string::npos);
}

TEST(LayoutJson, RoundTrip) {
  const auto geo = assemble(testing::geography_entries());
  const auto back = layout_from_json(nlohmann::json::parse(to_json(geo).dump()));
  EXPECT_EQ(back.placements, geo.placements);
  EXPECT_EQ(back.rows, geo.rows);
  EXPECT_EQ(back.unplaced.size(), geo.unplaced.size());
  EXPECT_THROW(layout_from_json(nlohmann::json{{"rows", 1}}), Error);
}

}  // namespace
}  // namespace eduverba
