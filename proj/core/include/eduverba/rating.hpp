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

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

namespace eduverba {

enum class Rating { A, B, C, D, E, Skip, Empty };
inline constexpr std::size_t kRatingCount = 7;
inline constexpr std::array<Rating, kRatingCount> kAllRatings{Rating::A, Rating::B, Rating::C, Rating::D,
                                                              Rating::E, Rating::Skip, Rating::Empty};

std::string_view to_string(Rating r);
/// Accepts "A".."E", "SKIP", "EMPTY" (case-insensitive); throws InvalidRating.
Rating parse_rating(std::string_view s);

struct RatingRecord {
  std::string example_id;
  int clue_index = 0;
  Rating rating = Rating::A;
  std::string annotator;
  std::chrono::system_clock::time_point rated_at{};
  /// Set for records written by the pipeline itself (generation failures).
  /// Only machine records may carry EMPTY.
  bool machine = false;
  /// Generator that produced the rated clue, when known.
  std::optional<std::string> model;

  bool operator==(const RatingRecord&) const = default;
};

/// Ledger line: the record's fields plus "crc", the CRC-32 (hex) of the
/// compact dump of the other fields.
std::string ledger_line(const RatingRecord& rec);
/// nullopt when the line is not a complete, checksum-valid record.
std::optional<RatingRecord> parse_ledger_line(std::string_view line);

struct LedgerLoad {
  std::vector<RatingRecord> records;  // file order
  std::size_t corrupt_lines = 0;
  bool partial_tail = false;  // last line lacks its newline
};

/// Missing file loads as empty.
LedgerLoad load_ledger(const std::filesystem::path& path);

struct SummaryFilter {
  std::optional<std::string> annotator;
  std::optional<std::string> model;
};

struct RatingSummary {
  std::size_t total = 0;
  std::array<std::size_t, kRatingCount> counts{};
  std::array<double, kRatingCount> percent{};
  /// Same distribution with SKIP removed from the denominator (its own slot is 0).
  std::array<double, kRatingCount> percent_excluding_skip{};
  /// A plus B, as a percentage.
  double acceptable_share = 0.0;
  double acceptable_share_excluding_skip = 0.0;

  std::size_t count(Rating r) const { return counts[static_cast<std::size_t>(r)]; }
  double pct(Rating r) const { return percent[static_cast<std::size_t>(r)]; }
};

nlohmann::ordered_json to_json(const RatingSummary& s);

/// Summary over the latest record per (example, clue, annotator).
RatingSummary summarize(std::span<const RatingRecord> latest, const SummaryFilter& filter = {});

/// Latest record per (example_id, clue_index, annotator), in order of first
/// appearance of each key.
std::vector<RatingRecord> latest_records(std::span<const RatingRecord> records);

struct PairAgreement {
  std::string annotator_a;
  std::string annotator_b;
  std::size_t shared = 0;  // clues both rated
  double observed = 0.0;   // fraction of identical ratings
  double kappa = 0.0;      // Cohen's kappa; 0 when undefined
};

std::vector<PairAgreement> agreement(std::span<const RatingRecord> latest);
nlohmann::ordered_json to_json(const PairAgreement& a);

/// Flat table: example_id,clue_index,rating,annotator,rated_at,machine,model.
void export_csv(std::span<const RatingRecord> records, std::ostream& out);

/// Append-only ledger plus its in-memory latest view. Writes are serialized
/// and flushed to the file before record() returns.
class RatingStore {
 public:
  /// `known_ids` enables the UnknownExample check; `clues_per_example`
  /// bounds clue_index.
  explicit RatingStore(std::filesystem::path ledger,
                       std::optional<std::unordered_set<std::string>> known_ids = std::nullopt,
                       int clues_per_example = 3);

  /// Validates then appends; returns the stored record.
  RatingRecord record(RatingRecord rec);
  /// One append and one flush for the whole batch; all-or-nothing validation.
  void record_many(std::span<const RatingRecord> recs);

  std::vector<RatingRecord> latest() const;
  std::vector<RatingRecord> all() const;
  RatingSummary summary(const SummaryFilter& filter = {}) const;
  std::size_t corrupt_lines() const;
  const std::filesystem::path& path() const { return path_; }

 private:
  using Key = std::tuple<std::string, int, std::string>;
  void validate(const RatingRecord& rec) const;
  void append_lines(const std::string& payload);
  void remember(const RatingRecord& rec);

  std::filesystem::path path_;
  std::optional<std::unordered_set<std::string>> known_ids_;
  int clues_per_example_;
  mutable std::mutex mu_;
  std::vector<RatingRecord> records_;
  std::map<Key, std::size_t> latest_index_;
  std::vector<Key> key_order_;
  std::size_t corrupt_ = 0;
  bool needs_newline_ = false;
};

}  // namespace eduverba
