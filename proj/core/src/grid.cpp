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

#include "eduverba/grid.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "eduverba/error.hpp"
#include "eduverba/text.hpp"

namespace eduverba {

std::string_view to_string(Direction d) { return d == Direction::Across ? "across" : "down"; }

Direction parse_direction(std::string_view s) {
  if (text::iequals(s, "across")) return Direction::Across;
  if (text::iequals(s, "down")) return Direction::Down;
  throw Error(Errc::MalformedRecord, "unknown direction '" + std::string(s) + "'");
}

std::string normalize_answer(std::string_view keyword) {
  std::u32string out;
  for (char32_t cp : text::to_u32(keyword)) {
    if (text::is_space(cp)) continue;
    if (!text::is_letter(cp))
      throw Error(Errc::NonAlphabetic, "answer '" + std::string(keyword) + "' contains a non-letter");
    out.push_back(text::to_upper(cp));
  }
  return text::to_utf8(out);
}

namespace {

constexpr int kMinWordLength = 3;

int dr(Direction d) { return d == Direction::Down ? 1 : 0; }
int dc(Direction d) { return d == Direction::Across ? 1 : 0; }
Direction perpendicular(Direction d) { return d == Direction::Across ? Direction::Down : Direction::Across; }

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::int64_t cell_key(int r, int c) {
  return (static_cast<std::int64_t>(r) << 32) ^ static_cast<std::uint32_t>(c);
}

struct Word {
  std::u32string letters;
  std::size_t entry = 0;
};

struct Placed {
  int word = 0;
  int row = 0;
  int col = 0;
  Direction dir = Direction::Across;
};

struct Cell {
  char32_t letter = 0;
  int across = -1;
  int down = -1;
  int& slot(Direction d) { return d == Direction::Across ? across : down; }
  int slot(Direction d) const { return d == Direction::Across ? across : down; }
};

struct Candidate {
  Placed p;
  int crossings = 0;
  bool clean = true;
  long area = 0;
  std::uint64_t tiebreak = 0;
};

class Search {
 public:
  Search(std::vector<Word> words, const AssembleConfig& cfg, std::vector<char> eligible)
      : words_(std::move(words)), cfg_(cfg), eligible_(std::move(eligible)), used_(words_.size(), 0) {
    eligible_left_ = static_cast<int>(std::count(eligible_.begin(), eligible_.end(), 1));
  }

  void run() {
    start_ = std::chrono::steady_clock::now();
    std::vector<int> roots(words_.size());
    std::iota(roots.begin(), roots.end(), 0);
    std::stable_sort(roots.begin(), roots.end(),
                     [&](int a, int b) { return words_[a].letters.size() > words_[b].letters.size(); });
    std::vector<Direction> root_dirs{Direction::Across};
    if (cfg_.max_rows != cfg_.max_cols) root_dirs.push_back(Direction::Down);
    for (int w : roots) {
      if (!eligible_[w]) continue;
      for (Direction d : root_dirs) {
        if (stop_) break;
        const Placed root{w, 0, 0, d};
        int crossings = 0;
        if (!fits(root, crossings)) continue;
        place(root);
        explore();
        unplace();
      }
    }
    exhausted_ = !stop_;
  }

  std::vector<Placed> best() const { return best_; }
  const std::vector<Word>& words() const { return words_; }
  std::size_t nodes() const { return nodes_; }
  bool exhausted() const { return exhausted_; }
  bool timed_out() const { return timed_out_; }

 private:
  const Cell* at(int r, int c) const {
    const auto it = cells_.find(cell_key(r, c));
    return it == cells_.end() ? nullptr : &it->second;
  }

  int length(const Placed& p) const { return static_cast<int>(words_[p.word].letters.size()); }

  bool starts_at(int idx, int r, int c) const { return placed_[idx].row == r && placed_[idx].col == c; }
  bool ends_at(int idx, int r, int c) const {
    const Placed& p = placed_[idx];
    const int n = length(p) - 1;
    return p.row + n * dr(p.dir) == r && p.col + n * dc(p.dir) == c;
  }

  struct Box {
    int r0, r1, c0, c1;
    long area() const { return static_cast<long>(r1 - r0 + 1) * (c1 - c0 + 1); }
  };

  Box box_with(const Placed& p) const {
    const int n = length(p) - 1;
    Box b{p.row, p.row + n * dr(p.dir), p.col, p.col + n * dc(p.dir)};
    if (!boxes_.empty()) {
      const Box& cur = boxes_.back();
      b = {std::min(b.r0, cur.r0), std::max(b.r1, cur.r1), std::min(b.c0, cur.c0), std::max(b.c1, cur.c1)};
    }
    return b;
  }

  // Whether p can be added while keeping every word bounded and every
  // shared cell a consistent Across/Down crossing.
  bool fits(const Placed& p, int& crossings) const {
    const Box b = box_with(p);
    if (b.r1 - b.r0 + 1 > cfg_.max_rows || b.c1 - b.c0 + 1 > cfg_.max_cols) return false;
    const int n = length(p);
    const int pr = dr(p.dir), pc = dc(p.dir);
    if (at(p.row - pr, p.col - pc) || at(p.row + n * pr, p.col + n * pc)) return false;
    const Direction other = perpendicular(p.dir);
    const int qr = dr(other), qc = dc(other);
    crossings = 0;
    for (int k = 0; k < n; ++k) {
      const int r = p.row + k * pr, c = p.col + k * pc;
      if (const Cell* cell = at(r, c)) {
        if (cell->letter != words_[p.word].letters[k] || cell->slot(p.dir) != -1) return false;
        ++crossings;
        continue;
      }
      // A new cell must not extend a perpendicular word through its end.
      if (const Cell* before = at(r - qr, c - qc); before && before->slot(other) != -1 &&
                                                  ends_at(before->slot(other), r - qr, c - qc))
        return false;
      if (const Cell* after = at(r + qr, c + qc); after && after->slot(other) != -1 &&
                                                 starts_at(after->slot(other), r + qr, c + qc))
        return false;
    }
    return true;
  }

  void place(const Placed& p) {
    boxes_.push_back(box_with(p));
    const int idx = static_cast<int>(placed_.size());
    placed_.push_back(p);
    used_[p.word] = 1;
    if (eligible_[p.word]) --eligible_left_;
    std::vector<std::int64_t> fresh;
    for (int k = 0; k < length(p); ++k) {
      const int r = p.row + k * dr(p.dir), c = p.col + k * dc(p.dir);
      auto [it, inserted] = cells_.try_emplace(cell_key(r, c));
      if (inserted) {
        it->second.letter = words_[p.word].letters[k];
        fresh.push_back(it->first);
      } else {
        ++crossings_;
      }
      it->second.slot(p.dir) = idx;
    }
    fresh_.push_back(std::move(fresh));
  }

  void unplace() {
    const Placed p = placed_.back();
    const int idx = static_cast<int>(placed_.size()) - 1;
    for (int k = 0; k < length(p); ++k) {
      const auto it = cells_.find(cell_key(p.row + k * dr(p.dir), p.col + k * dc(p.dir)));
      if (it->second.slot(p.dir) == idx) it->second.slot(p.dir) = -1;
    }
    for (auto key : fresh_.back()) cells_.erase(key);
    crossings_ -= length(p) - static_cast<int>(fresh_.back().size());
    fresh_.pop_back();
    used_[p.word] = 0;
    if (eligible_[p.word]) ++eligible_left_;
    placed_.pop_back();
    boxes_.pop_back();
  }

  // Every maximal run of two or more letters is exactly one placed word.
  bool runs_ok() const {
    for (const auto& [key, cell] : cells_) {
      const int r = static_cast<int>(key >> 32);
      const int c = static_cast<int>(static_cast<std::int32_t>(key & 0xffffffff));
      for (Direction d : {Direction::Across, Direction::Down}) {
        const int pr = dr(d), pc = dc(d);
        if (at(r - pr, c - pc) || !at(r + pr, c + pc)) continue;
        int len = 1;
        while (at(r + len * pr, c + len * pc)) ++len;
        const int idx = cell.slot(d);
        if (idx == -1 || !starts_at(idx, r, c) || length(placed_[idx]) != len) return false;
      }
    }
    return true;
  }

  std::string signature() const {
    const Box& b = boxes_.back();
    std::vector<std::array<int, 4>> parts;
    parts.reserve(placed_.size());
    for (const auto& p : placed_) parts.push_back({p.word, p.row - b.r0, p.col - b.c0, static_cast<int>(p.dir)});
    std::sort(parts.begin(), parts.end());
    std::string sig;
    sig.reserve(parts.size() * 16);
    for (const auto& q : parts) {
      for (int v : q) {
        sig.append(reinterpret_cast<const char*>(&v), sizeof v);
      }
    }
    return sig;
  }

  bool budget_spent() {
    if (stop_) return true;
    if (nodes_ >= cfg_.node_budget) stop_ = true;
    if ((nodes_ & 255) == 0 && std::chrono::steady_clock::now() - start_ > cfg_.time_budget) {
      stop_ = true;
      timed_out_ = true;
    }
    return stop_;
  }

  void consider() {
    if (!cfg_.allow_adjacent && !runs_ok()) return;
    const int count = static_cast<int>(placed_.size());
    const long area = boxes_.back().area();
    const bool better = count > best_count_ || (count == best_count_ && crossings_ > best_crossings_) ||
                        (count == best_count_ && crossings_ == best_crossings_ && area < best_area_);
    if (!better) return;
    best_ = placed_;
    best_count_ = count;
    best_crossings_ = crossings_;
    best_area_ = area;
  }

  void explore() {
    if (budget_spent()) return;
    if (!visited_.insert(signature()).second) return;
    ++nodes_;
    consider();
    if (static_cast<int>(placed_.size()) + eligible_left_ < best_count_) return;

    std::vector<Candidate> candidates;
    std::set<std::tuple<int, int, int, int>> seen;
    for (int w = 0; w < static_cast<int>(words_.size()); ++w) {
      if (used_[w] || !eligible_[w]) continue;
      const auto& letters = words_[w].letters;
      for (std::size_t h = 0; h < placed_.size(); ++h) {
        // By value: probing a candidate below grows placed_.
        const Placed host = placed_[h];
        const auto& host_letters = words_[host.word].letters;
        const Direction dir = perpendicular(host.dir);
        for (int j = 0; j < static_cast<int>(host_letters.size()); ++j) {
          const int xr = host.row + j * dr(host.dir), xc = host.col + j * dc(host.dir);
          for (int i = 0; i < static_cast<int>(letters.size()); ++i) {
            if (letters[i] != host_letters[j]) continue;
            const Placed p{w, xr - i * dr(dir), xc - i * dc(dir), dir};
            if (!seen.insert({w, p.row, p.col, static_cast<int>(dir)}).second) continue;
            int crossings = 0;
            if (!fits(p, crossings)) continue;
            Candidate cand{p, crossings, true, box_with(p).area(), 0};
            cand.tiebreak = mix(cfg_.seed ^ mix((static_cast<std::uint64_t>(w) << 40) ^
                                                (static_cast<std::uint64_t>(p.row + 4096) << 20) ^
                                                (static_cast<std::uint64_t>(p.col + 4096) << 1) ^
                                                static_cast<std::uint64_t>(dir)));
            if (!cfg_.allow_adjacent) {
              place(p);
              cand.clean = runs_ok();
              unplace();
            }
            candidates.push_back(cand);
          }
        }
      }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      if (a.clean != b.clean) return a.clean;
      if (a.crossings != b.crossings) return a.crossings > b.crossings;
      if (a.area != b.area) return a.area < b.area;
      return a.tiebreak < b.tiebreak;
    });
    for (const auto& cand : candidates) {
      if (budget_spent()) return;
      place(cand.p);
      explore();
      unplace();
    }
  }

  std::vector<Word> words_;
  const AssembleConfig& cfg_;
  std::vector<char> eligible_;
  std::vector<char> used_;
  int eligible_left_ = 0;

  std::unordered_map<std::int64_t, Cell> cells_;
  std::vector<Placed> placed_;
  std::vector<Box> boxes_;
  std::vector<std::vector<std::int64_t>> fresh_;
  int crossings_ = 0;

  std::vector<Placed> best_;
  int best_count_ = 0;
  int best_crossings_ = -1;
  long best_area_ = 0;

  std::unordered_set<std::string> visited_;
  std::size_t nodes_ = 0;
  std::chrono::steady_clock::time_point start_;
  bool stop_ = false;
  bool timed_out_ = false;
  bool exhausted_ = false;
};

}  // namespace

CellMap CrosswordLayout::cell_letters() const {
  CellMap cells;
  for (const auto& p : placements) {
    const auto letters = text::to_u32(p.word);
    for (int k = 0; k < static_cast<int>(letters.size()); ++k)
      cells[{p.row + k * dr(p.direction), p.col + k * dc(p.direction)}] = letters[k];
  }
  return cells;
}

int CrosswordLayout::intersections() const {
  std::map<std::pair<int, int>, int> cover;
  for (const auto& p : placements) {
    const auto n = static_cast<int>(text::to_u32(p.word).size());
    for (int k = 0; k < n; ++k) ++cover[{p.row + k * dr(p.direction), p.col + k * dc(p.direction)}];
  }
  return static_cast<int>(std::count_if(cover.begin(), cover.end(), [](const auto& kv) { return kv.second > 1; }));
}

CrosswordLayout assemble(std::span<const GridEntry> entries, const AssembleConfig& cfg, AssembleStats* stats) {
  if (entries.empty()) throw Error(Errc::NoEntries, "no entries to assemble");
  if (cfg.max_rows <= 0 || cfg.max_cols <= 0) throw Error(Errc::InvalidConfig, "grid dimensions must be positive");
  const int longest = std::max(cfg.max_rows, cfg.max_cols);

  std::vector<Word> words;
  std::vector<char> eligible;
  CrosswordLayout layout;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    Word w{text::to_u32(normalize_answer(entries[i].keyword)), i};
    if (static_cast<int>(w.letters.size()) > longest)
      throw Error(Errc::WordTooLong, "'" + entries[i].keyword + "' has " + std::to_string(w.letters.size()) +
                                         " letters; the board allows " + std::to_string(longest));
    eligible.push_back(static_cast<int>(w.letters.size()) >= kMinWordLength);
    words.push_back(std::move(w));
  }

  Search search(words, cfg, eligible);
  search.run();
  if (stats) *stats = {search.nodes(), search.exhausted(), search.timed_out()};

  const auto best = search.best();
  std::vector<char> placed(entries.size(), 0);
  int r0 = 0, c0 = 0, r1 = 0, c1 = 0;
  bool first = true;
  for (const auto& p : best) {
    const int n = static_cast<int>(words[p.word].letters.size()) - 1;
    const int er = p.row + n * dr(p.dir), ec = p.col + n * dc(p.dir);
    if (first) {
      r0 = p.row, c0 = p.col, r1 = er, c1 = ec;
      first = false;
    }
    r0 = std::min(r0, p.row), c0 = std::min(c0, p.col), r1 = std::max(r1, er), c1 = std::max(c1, ec);
  }
  for (const auto& p : best) {
    const GridEntry& e = entries[words[p.word].entry];
    placed[words[p.word].entry] = 1;
    layout.placements.push_back(
        {text::to_utf8(words[p.word].letters), e.keyword, e.clue, e.id, p.row - r0, p.col - c0, p.dir, 0});
  }
  layout.rows = best.empty() ? 0 : r1 - r0 + 1;
  layout.cols = best.empty() ? 0 : c1 - c0 + 1;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (placed[i]) continue;
    layout.unplaced.push_back({entries[i], eligible[i] ? "no valid crossing within the board"
                                                       : "shorter than " + std::to_string(kMinWordLength) + " letters"});
  }
  number_cells(layout);
  std::stable_sort(layout.placements.begin(), layout.placements.end(), [](const Placement& a, const Placement& b) {
    return std::pair(a.number, a.direction) < std::pair(b.number, b.direction);
  });
  return layout;
}

ValidationReport validate(const CrosswordLayout& layout, bool strict) {
  ValidationReport rep;
  auto problem = [&](std::string msg) {
    rep.ok = false;
    rep.problems.push_back(std::move(msg));
  };
  if (!layout.placements.empty() && (layout.rows <= 0 || layout.cols <= 0)) problem("non-positive dimensions");

  struct Slot {
    char32_t letter = 0;
    int across = -1;
    int down = -1;
  };
  std::map<std::pair<int, int>, Slot> cells;
  std::vector<int> lengths;
  for (std::size_t i = 0; i < layout.placements.size(); ++i) {
    const Placement& p = layout.placements[i];
    const std::string label = "'" + p.word + "' (" + std::string(to_string(p.direction)) + ")";
    try {
      if (normalize_answer(p.keyword) != p.word) problem(label + " does not match keyword '" + p.keyword + "'");
    } catch (const Error&) {
      problem(label + " keyword is not alphabetic");
    }
    const auto letters = text::to_u32(p.word);
    const int n = static_cast<int>(letters.size());
    lengths.push_back(n);
    if (n < kMinWordLength) problem(label + " is shorter than " + std::to_string(kMinWordLength));
    const int er = p.row + (n - 1) * dr(p.direction), ec = p.col + (n - 1) * dc(p.direction);
    if (p.row < 0 || p.col < 0 || er >= layout.rows || ec >= layout.cols) problem(label + " leaves the grid");
    for (int k = 0; k < n; ++k) {
      Slot& s = cells[{p.row + k * dr(p.direction), p.col + k * dc(p.direction)}];
      int& mine = p.direction == Direction::Across ? s.across : s.down;
      if (mine != -1) problem(label + " shares a cell with another " + std::string(to_string(p.direction)) + " word");
      mine = static_cast<int>(i);
      if (s.letter != 0 && s.letter != letters[k]) problem(label + " disagrees with a crossing letter");
      s.letter = letters[k];
    }
  }

  auto filled = [&](int r, int c) { return cells.count({r, c}) > 0; };
  for (std::size_t i = 0; i < layout.placements.size(); ++i) {
    const Placement& p = layout.placements[i];
    const int pr = dr(p.direction), pc = dc(p.direction);
    if (filled(p.row - pr, p.col - pc) || filled(p.row + lengths[i] * pr, p.col + lengths[i] * pc))
      problem("'" + p.word + "' runs into an adjacent letter");
  }

  if (strict) {
    for (const auto& [rc, s] : cells) {
      const auto [r, c] = rc;
      for (Direction d : {Direction::Across, Direction::Down}) {
        const int pr = dr(d), pc = dc(d);
        if (filled(r - pr, c - pc) || !filled(r + pr, c + pc)) continue;
        int len = 1;
        while (filled(r + len * pr, c + len * pc)) ++len;
        const int idx = d == Direction::Across ? s.across : s.down;
        const bool matches = idx != -1 && layout.placements[idx].row == r && layout.placements[idx].col == c &&
                             lengths[idx] == len;
        if (!matches)
          problem("incidental " + std::string(to_string(d)) + " run of " + std::to_string(len) + " letters at (" +
                  std::to_string(r) + "," + std::to_string(c) + ")");
      }
    }
  }

  // Connectivity through shared cells.
  std::vector<int> parent(layout.placements.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [rc, s] : cells) {
    if (s.across != -1 && s.down != -1) parent[find(s.across)] = find(s.down);
  }
  std::set<int> components;
  for (std::size_t i = 0; i < parent.size(); ++i) components.insert(find(static_cast<int>(i)));
  if (components.size() > 1) problem("layout splits into " + std::to_string(components.size()) + " disconnected parts");
  return rep;
}

Numbering number_cells(CrosswordLayout& layout) {
  Numbering out;
  out.numbers.assign(std::max(layout.rows, 0), std::vector<int>(std::max(layout.cols, 0), 0));
  std::map<std::pair<int, int>, std::vector<std::size_t>> starts;
  for (std::size_t i = 0; i < layout.placements.size(); ++i)
    starts[{layout.placements[i].row, layout.placements[i].col}].push_back(i);
  int next = 0;
  for (const auto& [rc, idxs] : starts) {  // std::map order is row-major
    ++next;
    if (rc.first >= 0 && rc.first < layout.rows && rc.second >= 0 && rc.second < layout.cols)
      out.numbers[rc.first][rc.second] = next;
    for (std::size_t i : idxs) {
      Placement& p = layout.placements[i];
      p.number = next;
      (p.direction == Direction::Across ? out.across : out.down).push_back({next, p.clue, p.word});
    }
  }
  auto by_number = [](const NumberedClue& a, const NumberedClue& b) { return a.number < b.number; };
  std::stable_sort(out.across.begin(), out.across.end(), by_number);
  std::stable_sort(out.down.begin(), out.down.end(), by_number);
  return out;
}

nlohmann::ordered_json to_json(const CrosswordLayout& layout) {
  nlohmann::ordered_json placements = nlohmann::ordered_json::array();
  for (const auto& p : layout.placements) {
    placements.push_back({{"number", p.number},
                          {"direction", to_string(p.direction)},
                          {"row", p.row},
                          {"col", p.col},
                          {"word", p.word},
                          {"keyword", p.keyword},
                          {"clue", p.clue},
                          {"id", p.id}});
  }
  nlohmann::ordered_json unplaced = nlohmann::ordered_json::array();
  for (const auto& u : layout.unplaced) {
    unplaced.push_back({{"keyword", u.entry.keyword}, {"clue", u.entry.clue}, {"id", u.entry.id}, {"reason", u.reason}});
  }
  return {{"rows", layout.rows},
          {"cols", layout.cols},
          {"intersections", layout.intersections()},
          {"placements", placements},
          {"unplaced", unplaced}};
}

CrosswordLayout layout_from_json(const nlohmann::json& j) {
  try {
    CrosswordLayout layout;
    layout.rows = j.at("rows").get<int>();
    layout.cols = j.at("cols").get<int>();
    for (const auto& p : j.at("placements")) {
      layout.placements.push_back({p.at("word").get<std::string>(), p.value("keyword", p.at("word").get<std::string>()),
                                   p.value("clue", ""), p.value("id", ""), p.at("row").get<int>(),
                                   p.at("col").get<int>(), parse_direction(p.at("direction").get<std::string>()),
                                   p.value("number", 0)});
    }
    for (const auto& u : j.value("unplaced", nlohmann::json::array())) {
      layout.unplaced.push_back(
          {{u.value("keyword", ""), u.value("clue", ""), u.value("id", "")}, u.value("reason", "")});
    }
    return layout;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::MalformedRecord, std::string("layout: ") + e.what());
  }
}

}  // namespace eduverba
