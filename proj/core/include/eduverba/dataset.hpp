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

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "eduverba/generate.hpp"
#include "eduverba/ingest.hpp"
#include "eduverba/prompt.hpp"
#include "eduverba/screen.hpp"

namespace eduverba {

struct ClueInstructExample {
  std::string id;
  std::string context;
  std::string keyword;
  std::string category;
  std::vector<std::string> clues;
  std::string source_url;

  bool operator==(const ClueInstructExample&) const = default;
};

using Corpus = std::vector<ClueInstructExample>;

void to_json(nlohmann::ordered_json& j, const ClueInstructExample& e);
void from_json(const nlohmann::ordered_json& j, ClueInstructExample& e);
void to_json(nlohmann::json& j, const ClueInstructExample& e);
void from_json(const nlohmann::json& j, ClueInstructExample& e);

/// 64-bit FNV-1a, used for stable content ids and config hashes.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 14695981039346656037ULL);
std::string hex64(std::uint64_t v);

/// Stable id: content hash of (url, keyword).
std::string example_id(std::string_view url, std::string_view keyword);

/// Throws InvariantViolation naming the first broken invariant. An empty
/// `categories` list skips the category check.
void validate_example(const ClueInstructExample& example, const ScreenConfig& cfg,
                      std::span<const std::string> categories = {});

ClueInstructExample build_example(const PageRecord& page, const ScreenDecision& decision, const ClueSet& clues,
                                  const ScreenConfig& cfg = {}, std::span<const std::string> categories = {});

/// Line-delimited records, one example per line.
Corpus read_corpus(const std::filesystem::path& path);
void write_corpus(const std::filesystem::path& path, const Corpus& corpus);
std::string corpus_line(const ClueInstructExample& example);

/// Uniform integer in [0, n) from a 64-bit engine, identical on every
/// platform (unlike std::uniform_int_distribution).
std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n);
/// Fisher-Yates with uniform_index.
template <typename T>
void stable_shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[uniform_index(rng, i)]);
}

struct SplitResult {
  Corpus train;
  Corpus test;
};

/// Seeded split stratified by category: proportional allocation with
/// largest-remainder rounding. Both halves keep corpus order.
SplitResult split(const Corpus& corpus, std::size_t test_size, std::uint64_t seed);

/// Uniform subset of round-half-up(fraction * |train|) rows. Subsets drawn
/// with the same seed are nested.
Corpus truncate_training(const Corpus& train, double fraction, std::uint64_t seed);

/// Buckets [edges[i], edges[i+1]) plus an open-ended last bucket
/// [edges.back(), inf). Values below edges[0] land in the first bucket.
struct Histogram {
  std::vector<double> edges;
  std::vector<std::size_t> counts;

  explicit Histogram(std::vector<double> bucket_edges = {});
  void add(double value);
  std::size_t total() const;
};

struct HistogramEdges {
  std::vector<double> context_words{0, 50, 100, 200, 400, 600, 800, 1000};
  std::vector<double> clue_words{0, 5, 10, 15, 20, 25, 30};
  std::vector<double> output_words{0, 20, 35, 50, 65, 80};
  std::vector<double> keyword_chars{0, 3, 5, 8, 11, 14, 17, 20, 21};
};

struct DatasetStats {
  std::size_t n_examples = 0;
  std::size_t n_clues = 0;
  std::size_t n_categories = 0;
  std::map<std::string, std::size_t> category_histogram;
  Histogram context_word_hist;
  Histogram clue_word_hist;
  Histogram output_word_hist;  // three clues of an example taken together
  Histogram keyword_char_hist;
};

DatasetStats stats(const Corpus& corpus, const HistogramEdges& edges = {});
nlohmann::ordered_json to_json(const DatasetStats& s);

struct TrainingRecord {
  std::string id;
  std::string input;
  std::string target;
};

/// input = the generation prompt for the example; target = the serialized
/// clue payload, which parse_clues reads back.
TrainingRecord export_instruction_format(const ClueInstructExample& example, const PromptTemplate& tpl);
std::string training_line(const TrainingRecord& record);

/// Column names of an externally published corpus. Empty id/source_url
/// columns are derived (id from url+keyword).
struct ImportMapping {
  std::string id;
  std::string context = "context";
  std::string keyword = "keyword";
  std::string category = "category";
  std::string clues = "clues";
  std::string source_url = "url";
};

void from_json(const nlohmann::json& j, ImportMapping& m);

/// Reads JSON Lines or a JSON array. Clues may be an array, a JSON string
/// of either form, or newline-separated text with optional numbering.
Corpus import_published(const std::filesystem::path& path, const ImportMapping& mapping = {});
std::vector<std::string> parse_clue_field(const nlohmann::json& value);

struct Manifest {
  std::uint64_t seed = 0;
  std::string config_hash;
  std::string tool_version;
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
};

nlohmann::ordered_json to_json(const Manifest& m);
void write_manifest(const std::filesystem::path& path, const Manifest& m);
std::string tool_version();

}  // namespace eduverba
