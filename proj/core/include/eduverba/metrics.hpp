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

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace eduverba::metrics {

/// Components in [0,1]. Percentages only appear in reports.
struct RougeScore {
  double recall = 0.0;
  double precision = 0.0;
  double f = 0.0;
};

/// Balanced F (beta = 1); zero when recall + precision == 0.
double f_measure(double recall, double precision) noexcept;

/// Lowercase, split on non-alphanumeric runs, digits kept.
std::vector<std::string> tokenize(std::string_view text);

/// Longest common subsequence length in O(|a|*|b|) time and
/// O(min(|a|,|b|)) space.
std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b);

/// Clipped n-gram overlap; `n` must be 1 or 2.
RougeScore rouge_n(std::string_view candidate, std::string_view reference, int n);
RougeScore rouge_n(std::span<const std::string> candidate, std::span<const std::string> reference, int n);

RougeScore rouge_l(std::string_view candidate, std::string_view reference);
RougeScore rouge_l(std::span<const std::string> candidate, std::span<const std::string> reference);

/// Default guard list of abbreviations after which a period does not end a
/// sentence.
const std::vector<std::string>& default_abbreviations();

/// Splits after . ! ? (plus any closing quotes/brackets) when followed by
/// whitespace and an uppercase letter, or by the end of the text. Sentences
/// are trimmed; every non-space character lands in exactly one sentence.
std::vector<std::string> split_sentences(std::string_view text,
                                         const std::vector<std::string>& abbreviations = default_abbreviations());

struct Adherence {
  std::size_t best_index = 0;
  double rouge_l_f = 0.0;
};

/// Best ROUGE-L F of `clue` against any single sentence of `context`, lowest
/// index on ties. Throws EmptyContext.
Adherence context_adherence(std::string_view clue, std::string_view context);

struct ClueAdherence {
  std::string clue_id;
  std::size_t best_sentence_index = 0;
  double rouge_l_f = 0.0;
};

struct AdherenceReport {
  std::vector<ClueAdherence> per_clue;
  double mean = 0.0;
  /// Equal-width buckets over [0,1]; a score of exactly 1 lands in the last.
  std::vector<std::size_t> histogram;
};

struct AdherenceInput {
  std::string id;
  std::string context;
  std::vector<std::string> clues;
};

AdherenceReport adherence_report(std::span<const AdherenceInput> examples, std::size_t buckets = 20,
                                 std::size_t concurrency = 1);
nlohmann::json to_json(const AdherenceReport& report);

struct GenerationScores {
  RougeScore rouge1;
  RougeScore rouge2;
  RougeScore rougeL;
};

/// Each hypothesis slot is scored against its best-matching reference clue
/// (max F per metric); the mean runs over `slots` with missing hypothesis
/// clues contributing zero.
GenerationScores eval_generation(std::span<const std::string> hypothesis, std::span<const std::string> reference,
                                 std::size_t slots = 3);

struct ExampleScores {
  std::string id;
  GenerationScores scores;
};

struct EvaluationReport {
  std::vector<ExampleScores> per_example;
  GenerationScores mean;
};

struct EvalPair {
  std::string id;
  std::vector<std::string> hypothesis;
  std::vector<std::string> reference;
};

EvaluationReport evaluate(std::span<const EvalPair> pairs, std::size_t concurrency = 1);

/// Percent with two decimals, e.g. 0.55404 -> 55.40.
double as_percent(double unit_score) noexcept;
nlohmann::json to_json(const EvaluationReport& report);

}  // namespace eduverba::metrics
