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
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace eduverba {

enum class Direction { Across, Down };
std::string_view to_string(Direction d);
Direction parse_direction(std::string_view s);

/// Uppercased, spaces removed; throws NonAlphabetic on anything that is not
/// a letter. "South American tapir" -> "SOUTHAMERICANTAPIR".
std::string normalize_answer(std::string_view keyword);

struct GridEntry {
  std::string keyword;
  std::string clue;
  std::string id;  // optional; carried through to the layout
};

struct Placement {
  std::string word;  // normalized keyword
  std::string keyword;
  std::string clue;
  std::string id;
  int row = 0;
  int col = 0;
  Direction direction = Direction::Across;
  int number = 0;

  bool operator==(const Placement&) const = default;
};

struct Unplaced {
  GridEntry entry;
  std::string reason;
};

using CellMap = std::map<std::pair<int, int>, char32_t>;

struct CrosswordLayout {
  int rows = 0;
  int cols = 0;
  std::vector<Placement> placements;
  std::vector<Unplaced> unplaced;

  /// (row, col) -> letter for every filled cell.
  CellMap cell_letters() const;
  /// Cells covered by two placements.
  int intersections() const;
};

struct AssembleConfig {
  int max_rows = 15;
  int max_cols = 15;
  std::uint64_t seed = 0;
  std::chrono::milliseconds time_budget{5000};
  /// Search nodes expanded before giving up on improvement. Unlike the time
  /// budget this cap is deterministic.
  std::size_t node_budget = 200000;
  /// Permit incidental runs of adjacent letters that are not words.
  bool allow_adjacent = false;
};

struct AssembleStats {
  std::size_t nodes = 0;
  bool exhausted = false;  // search space fully explored
  bool timed_out = false;
};

/// Backtracking placement search. Every word after the first crosses an
/// already placed word. Maximizes placed words, then intersections, then
/// compactness. Throws NoEntries, WordTooLong.
CrosswordLayout assemble(std::span<const GridEntry> entries, const AssembleConfig& cfg = {},
                         AssembleStats* stats = nullptr);

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> problems;
};

/// Bounds, crossing consistency (one Across plus one Down with equal
/// letters), no same-direction sharing, words not running into neighbours,
/// connectivity, word/keyword agreement. Strict mode also requires every
/// run of two or more letters to be a placed word.
ValidationReport validate(const CrosswordLayout& layout, bool strict = true);

struct NumberedClue {
  int number = 0;
  std::string clue;
  std::string word;
};

struct Numbering {
  /// rows x cols, 0 where the cell carries no number.
  std::vector<std::vector<int>> numbers;
  std::vector<NumberedClue> across;
  std::vector<NumberedClue> down;
};

/// Row-major numbering; writes each placement's number.
Numbering number_cells(CrosswordLayout& layout);

enum class RenderFormat { Text, Html, Printable };
enum class RenderView { Solution, Blank };
RenderFormat parse_render_format(std::string_view s);

std::string render(const CrosswordLayout& layout, RenderFormat format, RenderView view = RenderView::Solution);
/// Inverse of the text solution view.
CellMap parse_text_grid(std::string_view text);

nlohmann::ordered_json to_json(const CrosswordLayout& layout);
CrosswordLayout layout_from_json(const nlohmann::json& j);

}  // namespace eduverba
