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

#include "eduverba/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "eduverba/error.hpp"
#include "eduverba/parallel.hpp"
#include "eduverba/text.hpp"

namespace eduverba::metrics {

double f_measure(double recall, double precision) noexcept {
  constexpr double kBeta2 = 1.0;
  const double denom = recall + kBeta2 * precision;
  return denom > 0.0 ? (1.0 + kBeta2) * recall * precision / denom : 0.0;
}

std::vector<std::string> tokenize(std::string_view s) {
  std::vector<std::string> tokens;
  std::string current;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const char32_t cp = text::decode_next(s, pos);
    if (text::is_alnum(cp)) {
      text::append_utf8(current, text::to_lower(cp));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::size_t lcs_length(std::span<const std::string> a, std::span<const std::string> b) {
  if (a.size() < b.size()) std::swap(a, b);
  if (b.empty()) return 0;
  // One row over the shorter sequence; `diag` carries the north-west cell.
  std::vector<std::size_t> row(b.size() + 1, 0);
  for (const auto& x : a) {
    std::size_t diag = 0;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = (x == b[j - 1]) ? diag + 1 : std::max(row[j], row[j - 1]);
      diag = up;
    }
  }
  return row[b.size()];
}

namespace {

using NgramCounts = std::unordered_map<std::string, std::size_t>;

NgramCounts ngram_counts(std::span<const std::string> tokens, int n) {
  NgramCounts counts;
  if (tokens.size() < static_cast<std::size_t>(n)) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i];
    for (int k = 1; k < n; ++k) {
      key.push_back('\x1f');
      key += tokens[i + k];
    }
    ++counts[key];
  }
  return counts;
}

RougeScore make_score(std::size_t overlap, std::size_t reference_total, std::size_t candidate_total) {
  RougeScore s;
  s.recall = reference_total ? static_cast<double>(overlap) / reference_total : 0.0;
  s.precision = candidate_total ? static_cast<double>(overlap) / candidate_total : 0.0;
  s.f = f_measure(s.recall, s.precision);
  return s;
}

}  // namespace

RougeScore rouge_n(std::span<const std::string> candidate, std::span<const std::string> reference, int n) {
  if (n != 1 && n != 2) throw Error(Errc::InvalidConfig, "rouge_n supports n = 1 or 2");
  const auto cand = ngram_counts(candidate, n);
  const auto ref = ngram_counts(reference, n);
  std::size_t overlap = 0;
  for (const auto& [gram, count] : cand) {
    if (auto it = ref.find(gram); it != ref.end()) overlap += std::min(count, it->second);
  }
  const std::size_t cand_total = candidate.size() >= static_cast<std::size_t>(n) ? candidate.size() - n + 1 : 0;
  const std::size_t ref_total = reference.size() >= static_cast<std::size_t>(n) ? reference.size() - n + 1 : 0;
  return make_score(overlap, ref_total, cand_total);
}

RougeScore rouge_n(std::string_view candidate, std::string_view reference, int n) {
  const auto c = tokenize(candidate);
  const auto r = tokenize(reference);
  return rouge_n(c, r, n);
}

RougeScore rouge_l(std::span<const std::string> candidate, std::span<const std::string> reference) {
  return make_score(lcs_length(candidate, reference), reference.size(), candidate.size());
}

RougeScore rouge_l(std::string_view candidate, std::string_view reference) {
  const auto c = tokenize(candidate);
  const auto r = tokenize(reference);
  return rouge_l(c, r);
}

const std::vector<std::string>& default_abbreviations() {
  static const std::vector<std::string> kList = {
      "Dr",   "Mr",   "Mrs",  "Ms",   "Prof", "St",  "Sr",  "Jr",  "No",  "Nos", "Mt",   "Ft",  "Gen",
      "Col",  "Lt",   "Sgt",  "Capt", "Rev",  "Hon", "Inc", "Ltd", "Co",  "Corp", "vs",  "e.g", "i.e",
      "cf",   "approx", "ca", "c",    "Fig",  "Vol", "pp",  "Jan", "Feb", "Mar", "Apr",  "Jun", "Jul",
      "Aug",  "Sep",  "Sept", "Oct",  "Nov",  "Dec", "U.S", "U.K", "U.N", "J.K", "Ph.D", "Op",  "Ave"};
  return kList;
}

namespace {

bool is_closing(char32_t cp) {
  return cp == '"' || cp == '\'' || cp == ')' || cp == ']' || cp == 0x201D || cp == 0x2019 || cp == 0xBB;
}

bool is_opening(char32_t cp) {
  return cp == '"' || cp == '\'' || cp == '(' || cp == '[' || cp == 0x201C || cp == 0x2018 || cp == 0xAB;
}

// The whitespace-delimited word ending right before `end`, stripped of
// leading brackets/quotes.
std::string_view word_before(std::string_view s, std::size_t end) {
  std::size_t start = end;
  while (start > 0 && s[start - 1] != ' ' && s[start - 1] != '\n' && s[start - 1] != '\t' && s[start - 1] != '\r')
    --start;
  std::string_view w = s.substr(start, end - start);
  while (!w.empty() && (w.front() == '(' || w.front() == '"' || w.front() == '\'' || w.front() == '['))
    w.remove_prefix(1);
  return w;
}

}  // namespace

std::vector<std::string> split_sentences(std::string_view s, const std::vector<std::string>& abbreviations) {
  std::vector<std::string> out;
  auto emit = [&](std::size_t from, std::size_t to) {
    std::string_view piece = text::trim(s.substr(from, to - from));
    if (!piece.empty()) out.emplace_back(piece);
  };

  std::size_t sentence_start = 0;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t here = pos;
    const char32_t cp = text::decode_next(s, pos);
    if (cp != '.' && cp != '!' && cp != '?') continue;

    // Absorb runs like "?!" or "..." and closing quotes/brackets.
    std::size_t end = pos;
    while (end < s.size()) {
      std::size_t probe = end;
      const char32_t next = text::decode_next(s, probe);
      if (next == '.' || next == '!' || next == '?' || is_closing(next)) {
        end = probe;
      } else {
        break;
      }
    }

    bool boundary = false;
    std::size_t after = end;
    bool saw_space = false;
    while (after < s.size()) {
      std::size_t probe = after;
      if (!text::is_space(text::decode_next(s, probe))) break;
      after = probe;
      saw_space = true;
    }
    if (after == s.size()) {
      boundary = true;
    } else if (saw_space) {
      std::size_t probe = after;
      char32_t next = text::decode_next(s, probe);
      if (is_opening(next) && probe < s.size()) next = text::decode_next(s, probe);
      boundary = text::is_upper(next);
    }
    if (boundary && cp == '.' && end == pos) {
      const std::string_view word = word_before(s, here);
      if (std::find(abbreviations.begin(), abbreviations.end(), word) != abbreviations.end()) boundary = false;
    }
    if (boundary) {
      emit(sentence_start, end);
      sentence_start = end;
    }
    pos = end;
  }
  emit(sentence_start, s.size());
  return out;
}

Adherence context_adherence(std::string_view clue, std::string_view context) {
  const auto sentences = split_sentences(context);
  if (sentences.empty()) throw Error(Errc::EmptyContext, "context has no sentences");
  const auto clue_tokens = tokenize(clue);
  Adherence best;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const auto sent_tokens = tokenize(sentences[i]);
    const double f = rouge_l(clue_tokens, sent_tokens).f;
    if (i == 0 || f > best.rouge_l_f) {
      best.best_index = i;
      best.rouge_l_f = f;
    }
  }
  return best;
}

AdherenceReport adherence_report(std::span<const AdherenceInput> examples, std::size_t buckets,
                                 std::size_t concurrency) {
  if (buckets == 0) throw Error(Errc::InvalidConfig, "histogram needs at least one bucket");
  auto per_example = parallel_map(examples.size(), concurrency, [&](std::size_t i) {
    const auto& ex = examples[i];
    const auto sentences = split_sentences(ex.context);
    if (sentences.empty()) throw Error(Errc::EmptyContext, "example '" + ex.id + "' has an empty context");
    std::vector<std::vector<std::string>> sentence_tokens;
    sentence_tokens.reserve(sentences.size());
    for (const auto& sent : sentences) sentence_tokens.push_back(tokenize(sent));

    std::vector<ClueAdherence> rows;
    for (std::size_t k = 0; k < ex.clues.size(); ++k) {
      const auto clue_tokens = tokenize(ex.clues[k]);
      ClueAdherence row{ex.id + "#" + std::to_string(k), 0, 0.0};
      for (std::size_t s = 0; s < sentence_tokens.size(); ++s) {
        const double f = rouge_l(clue_tokens, sentence_tokens[s]).f;
        if (f > row.rouge_l_f) {
          row.rouge_l_f = f;
          row.best_sentence_index = s;
        }
      }
      rows.push_back(std::move(row));
    }
    return rows;
  });

  AdherenceReport report;
  report.histogram.assign(buckets, 0);
  double sum = 0.0;
  for (auto& rows : per_example) {
    for (auto& row : rows) {
      sum += row.rouge_l_f;
      const auto bucket = std::min<std::size_t>(static_cast<std::size_t>(row.rouge_l_f * buckets), buckets - 1);
      ++report.histogram[bucket];
      report.per_clue.push_back(std::move(row));
    }
  }
  report.mean = report.per_clue.empty() ? 0.0 : sum / static_cast<double>(report.per_clue.size());
  return report;
}

nlohmann::json to_json(const AdherenceReport& r) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& c : r.per_clue)
    per.push_back({{"clue_id", c.clue_id}, {"best_sentence_index", c.best_sentence_index}, {"rouge_l_f", c.rouge_l_f}});
  const std::size_t buckets = r.histogram.size();
  nlohmann::json hist = nlohmann::json::array();
  for (std::size_t b = 0; b < buckets; ++b) {
    hist.push_back({{"lo", static_cast<double>(b) / buckets}, {"hi", static_cast<double>(b + 1) / buckets},
                    {"count", r.histogram[b]}});
  }
  return {{"n_clues", r.per_clue.size()}, {"mean", r.mean}, {"mean_percent", as_percent(r.mean)},
          {"histogram", hist}, {"per_clue", per}};
}

GenerationScores eval_generation(std::span<const std::string> hypothesis, std::span<const std::string> reference,
                                 std::size_t slots) {
  GenerationScores total;
  if (slots == 0) return total;
  std::vector<std::vector<std::string>> ref_tokens;
  for (const auto& r : reference) ref_tokens.push_back(tokenize(r));

  auto accumulate = [](RougeScore& acc, const RougeScore& s) {
    acc.recall += s.recall;
    acc.precision += s.precision;
    acc.f += s.f;
  };
  auto best_of = [&](const std::vector<std::string>& hyp, auto&& scorer) {
    RougeScore best;
    for (const auto& ref : ref_tokens) {
      const RougeScore s = scorer(hyp, ref);
      if (s.f > best.f) best = s;
    }
    return best;
  };

  const std::size_t used = std::min(hypothesis.size(), slots);
  for (std::size_t i = 0; i < used; ++i) {
    const auto hyp = tokenize(hypothesis[i]);
    accumulate(total.rouge1, best_of(hyp, [](const auto& h, const auto& r) { return rouge_n(h, r, 1); }));
    accumulate(total.rouge2, best_of(hyp, [](const auto& h, const auto& r) { return rouge_n(h, r, 2); }));
    accumulate(total.rougeL, best_of(hyp, [](const auto& h, const auto& r) { return rouge_l(h, r); }));
  }
  for (RougeScore* s : {&total.rouge1, &total.rouge2, &total.rougeL}) {
    s->recall /= static_cast<double>(slots);
    s->precision /= static_cast<double>(slots);
    s->f /= static_cast<double>(slots);
  }
  return total;
}

EvaluationReport evaluate(std::span<const EvalPair> pairs, std::size_t concurrency) {
  EvaluationReport report;
  auto scores = parallel_map(pairs.size(), concurrency,
                             [&](std::size_t i) { return eval_generation(pairs[i].hypothesis, pairs[i].reference); });
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    report.per_example.push_back({pairs[i].id, scores[i]});
    for (auto [acc, s] : {std::pair{&report.mean.rouge1, &scores[i].rouge1},
                          std::pair{&report.mean.rouge2, &scores[i].rouge2},
                          std::pair{&report.mean.rougeL, &scores[i].rougeL}}) {
      acc->recall += s->recall;
      acc->precision += s->precision;
      acc->f += s->f;
    }
  }
  if (!pairs.empty()) {
    const double n = static_cast<double>(pairs.size());
    for (RougeScore* s : {&report.mean.rouge1, &report.mean.rouge2, &report.mean.rougeL}) {
      s->recall /= n;
      s->precision /= n;
      s->f /= n;
    }
  }
  return report;
}

double as_percent(double unit_score) noexcept { return std::round(unit_score * 10000.0) / 100.0; }

namespace {

nlohmann::json score_json(const RougeScore& s) {
  return {{"recall", as_percent(s.recall)}, {"precision", as_percent(s.precision)}, {"f", as_percent(s.f)}};
}

nlohmann::json scores_json(const GenerationScores& g) {
  return {{"rouge1", score_json(g.rouge1)}, {"rouge2", score_json(g.rouge2)}, {"rougeL", score_json(g.rougeL)}};
}

}  // namespace

nlohmann::json to_json(const EvaluationReport& r) {
  nlohmann::json per = nlohmann::json::array();
  for (const auto& e : r.per_example) {
    auto row = scores_json(e.scores);
    row["id"] = e.id;
    per.push_back(std::move(row));
  }
  return {{"n_examples", r.per_example.size()}, {"aggregate", scores_json(r.mean)}, {"per_example", per}};
}

}  // namespace eduverba::metrics
