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

#include "eduverba/rating.hpp"

#include <zlib.h>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <unistd.h>

#include "eduverba/error.hpp"
#include "eduverba/ingest.hpp"
#include "eduverba/text.hpp"

namespace eduverba {
namespace {

constexpr std::array<std::string_view, kRatingCount> kNames{"A", "B", "C", "D", "E", "SKIP", "EMPTY"};

std::size_t slot(Rating r) { return static_cast<std::size_t>(r); }

nlohmann::ordered_json record_fields(const RatingRecord& r) {
  nlohmann::ordered_json j{{"example_id", r.example_id},
                           {"clue_index", r.clue_index},
                           {"rating", to_string(r.rating)},
                           {"annotator", r.annotator},
                           {"rated_at", format_timestamp(r.rated_at)}};
  if (r.machine) j["machine"] = true;
  if (r.model) j["model"] = *r.model;
  return j;
}

std::string crc_hex(const std::string& s) {
  const uLong crc = crc32(crc32(0L, Z_NULL, 0), reinterpret_cast<const Bytef*>(s.data()), static_cast<uInt>(s.size()));
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08lx", static_cast<unsigned long>(crc & 0xffffffffUL));
  return buf;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

double pct(std::size_t part, std::size_t whole) {
  return whole == 0 ? 0.0 : 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

}  // namespace

std::string_view to_string(Rating r) { return kNames[slot(r)]; }

Rating parse_rating(std::string_view s) {
  const std::string up = text::uppercase(text::trim(s));
  for (std::size_t i = 0; i < kRatingCount; ++i) {
    if (up == kNames[i]) return kAllRatings[i];
  }
  if (up == "RATING-A" || up == "RATING-B" || up == "RATING-C" || up == "RATING-D" || up == "RATING-E")
    return parse_rating(up.substr(7));
  throw Error(Errc::InvalidRating, "unknown rating '" + std::string(s) + "'");
}

std::string ledger_line(const RatingRecord& rec) {
  auto j = record_fields(rec);
  j["crc"] = crc_hex(j.dump());
  return j.dump();
}

std::optional<RatingRecord> parse_ledger_line(std::string_view line) {
  auto j = nlohmann::ordered_json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("crc") || !j["crc"].is_string()) return std::nullopt;
  const std::string crc = j["crc"].get<std::string>();
  j.erase("crc");
  if (crc_hex(j.dump()) != crc) return std::nullopt;
  try {
    RatingRecord r;
    r.example_id = j.at("example_id").get<std::string>();
    r.clue_index = j.at("clue_index").get<int>();
    r.rating = parse_rating(j.at("rating").get<std::string>());
    r.annotator = j.at("annotator").get<std::string>();
    r.rated_at = parse_timestamp(j.at("rated_at").get<std::string>());
    r.machine = j.value("machine", false);
    if (j.contains("model")) r.model = j["model"].get<std::string>();
    return r;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

LedgerLoad load_ledger(const std::filesystem::path& path) {
  LedgerLoad out;
  std::ifstream in(path, std::ios::binary);
  if (!in) return out;
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::size_t pos = 0;
  while (pos < data.size()) {
    std::size_t end = data.find('\n', pos);
    const bool complete = end != std::string::npos;
    if (!complete) end = data.size();
    std::string_view line(data.data() + pos, end - pos);
    pos = end + 1;
    if (!complete) out.partial_tail = true;
    if (text::trim(line).empty()) continue;
    if (auto rec = parse_ledger_line(line)) {
      out.records.push_back(std::move(*rec));
    } else if (complete) {
      ++out.corrupt_lines;
    }
  }
  return out;
}

std::vector<RatingRecord> latest_records(std::span<const RatingRecord> records) {
  std::map<std::tuple<std::string_view, int, std::string_view>, std::size_t> index;
  std::vector<RatingRecord> out;
  for (const auto& r : records) {
    auto [it, inserted] = index.try_emplace({r.example_id, r.clue_index, r.annotator}, out.size());
    if (inserted) {
      out.push_back(r);
    } else {
      out[it->second] = r;
    }
  }
  return out;
}

RatingSummary summarize(std::span<const RatingRecord> latest, const SummaryFilter& filter) {
  RatingSummary s;
  for (const auto& r : latest) {
    if (filter.annotator && r.annotator != *filter.annotator) continue;
    if (filter.model && r.model != filter.model) continue;
    ++s.counts[slot(r.rating)];
    ++s.total;
  }
  const std::size_t skip = s.count(Rating::Skip);
  for (std::size_t i = 0; i < kRatingCount; ++i) {
    s.percent[i] = pct(s.counts[i], s.total);
    if (i != slot(Rating::Skip)) s.percent_excluding_skip[i] = pct(s.counts[i], s.total - skip);
  }
  const std::size_t acceptable = s.count(Rating::A) + s.count(Rating::B);
  s.acceptable_share = pct(acceptable, s.total);
  s.acceptable_share_excluding_skip = pct(acceptable, s.total - skip);
  return s;
}

nlohmann::ordered_json to_json(const RatingSummary& s) {
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  nlohmann::ordered_json percent = nlohmann::ordered_json::object();
  nlohmann::ordered_json percent_ex = nlohmann::ordered_json::object();
  for (std::size_t i = 0; i < kRatingCount; ++i) {
    const std::string name(kNames[i]);
    counts[name] = s.counts[i];
    percent[name] = s.percent[i];
    if (kAllRatings[i] != Rating::Skip) percent_ex[name] = s.percent_excluding_skip[i];
  }
  return {{"total", s.total},
          {"counts", counts},
          {"percent", percent},
          {"percent_excluding_skip", percent_ex},
          {"acceptable_share", s.acceptable_share},
          {"acceptable_share_excluding_skip", s.acceptable_share_excluding_skip}};
}

std::vector<PairAgreement> agreement(std::span<const RatingRecord> latest) {
  std::map<std::string, std::map<std::pair<std::string, int>, Rating>> by_annotator;
  for (const auto& r : latest) {
    if (r.machine) continue;
    by_annotator[r.annotator][{r.example_id, r.clue_index}] = r.rating;
  }
  std::vector<PairAgreement> out;
  for (auto a = by_annotator.begin(); a != by_annotator.end(); ++a) {
    for (auto b = std::next(a); b != by_annotator.end(); ++b) {
      PairAgreement pa{a->first, b->first};
      std::array<std::size_t, kRatingCount> ma{}, mb{};
      std::size_t same = 0;
      for (const auto& [item, ra] : a->second) {
        const auto it = b->second.find(item);
        if (it == b->second.end()) continue;
        ++pa.shared;
        ++ma[slot(ra)];
        ++mb[slot(it->second)];
        if (ra == it->second) ++same;
      }
      if (pa.shared > 0) {
        const double n = static_cast<double>(pa.shared);
        pa.observed = static_cast<double>(same) / n;
        double expected = 0.0;
        for (std::size_t i = 0; i < kRatingCount; ++i) expected += (ma[i] / n) * (mb[i] / n);
        pa.kappa = expected < 1.0 ? (pa.observed - expected) / (1.0 - expected) : 0.0;
      }
      out.push_back(std::move(pa));
    }
  }
  return out;
}

nlohmann::ordered_json to_json(const PairAgreement& a) {
  return {{"annotator_a", a.annotator_a},
          {"annotator_b", a.annotator_b},
          {"shared", a.shared},
          {"observed", a.observed},
          {"kappa", a.kappa}};
}

void export_csv(std::span<const RatingRecord> records, std::ostream& out) {
  out << "example_id,clue_index,rating,annotator,rated_at,machine,model\n";
  for (const auto& r : records) {
    out << csv_field(r.example_id) << ',' << r.clue_index << ',' << to_string(r.rating) << ','
        << csv_field(r.annotator) << ',' << format_timestamp(r.rated_at) << ',' << (r.machine ? "true" : "false")
        << ',' << csv_field(r.model.value_or("")) << '\n';
  }
}

RatingStore::RatingStore(std::filesystem::path ledger, std::optional<std::unordered_set<std::string>> known_ids,
                         int clues_per_example)
    : path_(std::move(ledger)), known_ids_(std::move(known_ids)), clues_per_example_(clues_per_example) {
  auto loaded = load_ledger(path_);
  corrupt_ = loaded.corrupt_lines;
  needs_newline_ = loaded.partial_tail;
  for (auto& r : loaded.records) remember(r);
}

void RatingStore::validate(const RatingRecord& rec) const {
  if (known_ids_ && !known_ids_->count(rec.example_id))
    throw Error(Errc::UnknownExample, "no example with id '" + rec.example_id + "'");
  if (rec.clue_index < 0 || rec.clue_index >= clues_per_example_)
    throw Error(Errc::InvalidIndex, "clue_index " + std::to_string(rec.clue_index) + " outside [0," +
                                        std::to_string(clues_per_example_) + ")");
  if (rec.annotator.empty()) throw Error(Errc::InvalidRating, "annotator is empty");
  if (rec.rating == Rating::Empty && !rec.machine)
    throw Error(Errc::InvalidRating, "EMPTY is reserved for machine-assigned records");
}

void RatingStore::append_lines(const std::string& payload) {
  std::FILE* f = std::fopen(path_.c_str(), "ab");
  if (!f) throw Error(Errc::CorpusUnreadable, "cannot open ledger '" + path_.string() + "' for append");
  std::string data;
  if (needs_newline_) data.push_back('\n');
  data += payload;
  const bool ok = std::fwrite(data.data(), 1, data.size(), f) == data.size() && std::fflush(f) == 0 &&
                  ::fsync(fileno(f)) == 0;
  std::fclose(f);
  if (!ok) throw Error(Errc::CorpusUnreadable, "short write to ledger '" + path_.string() + "'");
  needs_newline_ = false;
}

void RatingStore::remember(const RatingRecord& rec) {
  Key key{rec.example_id, rec.clue_index, rec.annotator};
  auto [it, inserted] = latest_index_.try_emplace(key, records_.size());
  if (inserted) {
    key_order_.push_back(std::move(key));
  } else {
    it->second = records_.size();
  }
  records_.push_back(rec);
}

RatingRecord RatingStore::record(RatingRecord rec) {
  validate(rec);
  if (rec.rated_at == std::chrono::system_clock::time_point{}) rec.rated_at = std::chrono::system_clock::now();
  rec.rated_at = std::chrono::floor<std::chrono::seconds>(rec.rated_at);
  std::lock_guard lock(mu_);
  append_lines(ledger_line(rec) + '\n');
  remember(rec);
  return rec;
}

void RatingStore::record_many(std::span<const RatingRecord> recs) {
  std::vector<RatingRecord> ready(recs.begin(), recs.end());
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  std::string payload;
  for (auto& r : ready) {
    validate(r);
    r.rated_at = r.rated_at == std::chrono::system_clock::time_point{}
                     ? now
                     : std::chrono::floor<std::chrono::seconds>(r.rated_at);
    payload += ledger_line(r);
    payload.push_back('\n');
  }
  std::lock_guard lock(mu_);
  if (!payload.empty()) append_lines(payload);
  for (const auto& r : ready) remember(r);
}

std::vector<RatingRecord> RatingStore::latest() const {
  std::lock_guard lock(mu_);
  std::vector<RatingRecord> out;
  out.reserve(key_order_.size());
  for (const auto& k : key_order_) out.push_back(records_[latest_index_.at(k)]);
  return out;
}

std::vector<RatingRecord> RatingStore::all() const {
  std::lock_guard lock(mu_);
  return records_;
}

RatingSummary RatingStore::summary(const SummaryFilter& filter) const { return summarize(latest(), filter); }

std::size_t RatingStore::corrupt_lines() const {
  std::lock_guard lock(mu_);
  return corrupt_;
}

}  // namespace eduverba
