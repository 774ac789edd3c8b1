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

#include "test_support.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "eduverba/ingest.hpp"

namespace eduverba::testing {
namespace fs = std::filesystem;

TempDir::TempDir() {
  std::string pattern = (fs::temp_directory_path() / "eduverba-test-XXXXXX").string();
  if (!::mkdtemp(pattern.data())) throw std::runtime_error("mkdtemp failed");
  path_ = pattern;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_file(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fixture_pages() { return fs::path(EDUVERBA_TEST_FIXTURES) / "pages"; }

std::string made_up_word(std::size_t index) {
  static constexpr std::string_view kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z"};
  static constexpr std::string_view kVowels[] = {"a", "e", "i", "o", "u"};
  std::string w;
  std::size_t x = index + 1;
  // Three syllables minimum keeps words at 6+ letters.
  for (int syllable = 0; syllable < 3 || x > 0; ++syllable) {
    w += kOnsets[x % 14];
    x /= 14;
    w += kVowels[x % 5];
    x /= 5;
  }
  w[0] = static_cast<char>(w[0] - 'a' + 'A');
  return w;
}

namespace {

constexpr std::string_view kFiller[] = {
    "river",   "valley", "ancient",  "people", "market", "northern", "stone",   "record",  "museum", "season",
    "harbour", "council", "festival", "forest", "bridge", "language", "garden",  "railway", "school", "temple",
    "island",  "trade",   "century",  "empire", "coastal", "village", "painting", "mineral", "orchard", "canal"};

std::string sentence(std::mt19937_64& rng, std::size_t words) {
  std::string s = "The";
  for (std::size_t i = 1; i < words; ++i) {
    s += ' ';
    s += kFiller[rng() % std::size(kFiller)];
  }
  s += '.';
  return s;
}

}  // namespace

std::vector<GeneratedPage> generate_fixture_pages(const fs::path& root, std::size_t n,
                                                  const std::vector<std::string>& categories, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<GeneratedPage> pages;
  for (std::size_t i = 0; i < n; ++i) {
    GeneratedPage p;
    p.category = categories[i % categories.size()];
    p.keyword = made_up_word(i * 7 + 3);
    p.title = p.keyword + " (" + std::to_string(i) + ")";
    const auto roll = rng() % 100;
    p.views = roll < 20 ? static_cast<std::int64_t>(rng() % 9000) : 10001 + static_cast<std::int64_t>(rng() % 90000);
    p.importance = roll < 20 ? (roll % 2 ? "Low" : "Mid") : (roll % 3 == 0 ? "Top" : "High");
    p.lead_words = (i % 17 == 5) ? 12 : 40 + rng() % 160;
    p.alphabetic_keyword = i % 23 != 11;
    if (!p.alphabetic_keyword) p.keyword += "-19";

    std::string lead = "'''" + p.keyword + "''' is a";
    std::size_t words = 3;
    while (words < p.lead_words) {
      const std::size_t len = std::min<std::size_t>(6 + rng() % 10, p.lead_words - words);
      lead += ' ';
      lead += sentence(rng, len);
      words += len;
    }
    const std::string content = lead + "\n\n== Details ==\nSENTINEL_TAIL_TOKEN more text.\n";
    const std::string stem = FixtureSource::file_stem_for(p.title);
    write_file(root / p.category / (stem + ".wiki"), content);
    std::string meta = "views = " + std::to_string(p.views) + "\nimportance = " + p.importance +
                       "\nurl = https://example.org/wiki/page_" + std::to_string(i) + "\n";
    write_file(root / p.category / (stem + ".meta"), meta);
    pages.push_back(std::move(p));
  }
  return pages;
}

Corpus synthetic_corpus(std::size_t n, std::uint64_t seed) {
  const auto categories = default_categories();
  // Weights 1..20 so categories differ in size.
  std::vector<double> weights;
  for (std::size_t i = 0; i < categories.size(); ++i) weights.push_back(static_cast<double>(i + 1));
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  std::mt19937_64 rng(seed);
  std::string context;
  for (int i = 0; i < 40; ++i) context += std::string(i ? " " : "") + std::string(kFiller[i % std::size(kFiller)]);
  Corpus corpus;
  corpus.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    ClueInstructExample e;
    e.keyword = made_up_word(i);
    e.category = categories[pick(rng)].name;
    e.source_url = "https://example.org/wiki/syn_" + std::to_string(i);
    e.id = example_id(e.source_url, e.keyword);
    e.context = e.keyword + " " + context;
    e.clues = {"First clue about " + std::to_string(i), "Second clue of the row", "Third clue in the set"};
    corpus.push_back(std::move(e));
  }
  return corpus;
}

namespace {

struct OraclePlacement {
  int word;
  int row;
  int col;
  bool down;
  auto operator<=>(const OraclePlacement&) const = default;
};

class GridOracle {
 public:
  GridOracle(const std::vector<std::string>& words, int rows, int cols) : words_(words), rows_(rows), cols_(cols) {}

  GridOptimum solve() {
    for (int w = 0; w < static_cast<int>(words_.size()); ++w) {
      for (bool down : {false, true}) {
        std::vector<OraclePlacement> start = {{w, 0, 0, down}};
        if (consistent(start)) grow(start);
      }
    }
    return best_;
  }

 private:
  struct Cell {
    char letter;
    int across = -1;
    int down = -1;
  };

  std::map<std::pair<int, int>, Cell> cells_of(const std::vector<OraclePlacement>& ps, bool& ok) const {
    std::map<std::pair<int, int>, Cell> cells;
    ok = true;
    for (int i = 0; i < static_cast<int>(ps.size()) && ok; ++i) {
      const auto& p = ps[i];
      const auto& w = words_[p.word];
      for (int k = 0; k < static_cast<int>(w.size()); ++k) {
        const std::pair<int, int> rc{p.row + (p.down ? k : 0), p.col + (p.down ? 0 : k)};
        auto [it, fresh] = cells.try_emplace(rc, Cell{w[k]});
        if (!fresh && it->second.letter != w[k]) ok = false;
        int& slot = p.down ? it->second.down : it->second.across;
        if (slot != -1) ok = false;
        slot = i;
      }
    }
    return cells;
  }

  bool consistent(const std::vector<OraclePlacement>& ps) const {
    bool ok = true;
    const auto cells = cells_of(ps, ok);
    if (!ok) return false;
    int r0 = 1 << 20, r1 = -(1 << 20), c0 = 1 << 20, c1 = -(1 << 20);
    for (const auto& [rc, cell] : cells) {
      r0 = std::min(r0, rc.first), r1 = std::max(r1, rc.first);
      c0 = std::min(c0, rc.second), c1 = std::max(c1, rc.second);
    }
    return r1 - r0 + 1 <= rows_ && c1 - c0 + 1 <= cols_;
  }

  // Every maximal horizontal/vertical run of two or more letters is exactly a
  // placed word in that direction.
  bool strict(const std::vector<OraclePlacement>& ps, int& crossings) const {
    bool ok = true;
    const auto cells = cells_of(ps, ok);
    if (!ok) return false;
    crossings = 0;
    for (const auto& [rc, cell] : cells) {
      if (cell.across != -1 && cell.down != -1) ++crossings;
      for (bool down : {false, true}) {
        const int dr = down ? 1 : 0, dc = down ? 0 : 1;
        const auto filled = [&](int r, int c) { return cells.count({r, c}) > 0; };
        if (filled(rc.first - dr, rc.second - dc) || !filled(rc.first + dr, rc.second + dc)) continue;
        int len = 1;
        while (filled(rc.first + len * dr, rc.second + len * dc)) ++len;
        const int idx = down ? cell.down : cell.across;
        if (idx == -1) return false;
        const auto& p = ps[idx];
        if (p.row != rc.first || p.col != rc.second || static_cast<int>(words_[p.word].size()) != len) return false;
      }
    }
    return true;
  }

  std::vector<OraclePlacement> canonical(std::vector<OraclePlacement> ps) const {
    int r0 = ps[0].row, c0 = ps[0].col;
    for (const auto& p : ps) r0 = std::min(r0, p.row), c0 = std::min(c0, p.col);
    for (auto& p : ps) p.row -= r0, p.col -= c0;
    std::sort(ps.begin(), ps.end());
    return ps;
  }

  void grow(const std::vector<OraclePlacement>& ps) {
    if (!seen_.insert(canonical(ps)).second) return;
    int crossings = 0;
    if (strict(ps, crossings)) {
      const int n = static_cast<int>(ps.size());
      if (n > best_.words || (n == best_.words && crossings > best_.crossings)) best_ = {n, crossings};
    }
    std::vector<char> used(words_.size(), 0);
    for (const auto& p : ps) used[p.word] = 1;
    for (int w = 0; w < static_cast<int>(words_.size()); ++w) {
      if (used[w]) continue;
      for (const auto& host : ps) {
        const auto& hw = words_[host.word];
        for (int j = 0; j < static_cast<int>(hw.size()); ++j) {
          for (int i = 0; i < static_cast<int>(words_[w].size()); ++i) {
            if (words_[w][i] != hw[j]) continue;
            const int r = host.row + (host.down ? j : 0), c = host.col + (host.down ? 0 : j);
            OraclePlacement next = host.down ? OraclePlacement{w, r, c - i, false} : OraclePlacement{w, r - i, c, true};
            auto grown = ps;
            grown.push_back(next);
            if (consistent(grown)) grow(grown);
          }
        }
      }
    }
  }

  const std::vector<std::string>& words_;
  int rows_, cols_;
  GridOptimum best_;
  std::set<std::vector<OraclePlacement>> seen_;
};

}  // namespace

GridOptimum exhaustive_grid_optimum(const std::vector<std::string>& words, int max_rows, int max_cols) {
  return GridOracle(words, max_rows, max_cols).solve();
}

std::vector<std::string> fuzz_grid_words(std::uint64_t seed, std::size_t count) {
  static constexpr std::string_view kAlphabet = "AEIRSTN";
  std::mt19937_64 rng(seed);
  std::vector<std::string> words;
  while (words.size() < count) {
    std::string w(3 + rng() % 4, 'A');
    for (auto& ch : w) ch = kAlphabet[rng() % kAlphabet.size()];
    if (std::find(words.begin(), words.end(), w) == words.end()) words.push_back(w);
  }
  return words;
}

std::vector<GridEntry> geography_entries() {
  return {
      {"Andes", "Longest continental mountain range, running down western South America", "geo-1"},
      {"Sahara", "Largest hot desert, spanning much of North Africa", "geo-2"},
      {"Atoll", "Ring-shaped coral reef enclosing a lagoon", "geo-3"},
      {"Delta", "Landform built from sediment where a river meets the sea", "geo-4"},
      {"Glacier", "Slow-moving mass of compacted ice", "geo-5"},
      {"Island", "Land surrounded by water on all sides", "geo-6"},
      {"Canyon", "Deep gorge carved by a river", "geo-7"},
      {"Volcano", "Opening in the crust through which lava erupts", "geo-8"},
  };
}

}  // namespace eduverba::testing
