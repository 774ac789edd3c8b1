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

#include <filesystem>
#include <memory>
#include <string>

#include "eduverba/dataset.hpp"
#include "eduverba/grid.hpp"
#include "eduverba/rating.hpp"

namespace eduverba {

struct ServeConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path corpus;
  std::filesystem::path ledger;
  /// Built review UI assets, mounted at "/" when set.
  std::filesystem::path ui_dir;
  /// Where assembled layouts are stored; defaults to "puzzles" next to the ledger.
  std::filesystem::path puzzles_dir;
  AssembleConfig grid;
};

/// Index of the clue to put in a puzzle: lowest mean A..E rank over the
/// latest ratings, unrated clues counted as C, ties to the lower index.
int best_rated_clue(std::span<const RatingRecord> latest, const std::string& example_id, int clue_count = 3);

/// JSON API over a corpus and a rating ledger:
///   GET  /api/examples?offset&limit[&annotator]   GET /api/examples/{id}
///   POST /api/ratings                             GET /api/summary[?annotator&model]
///   POST /api/puzzles                             GET /api/puzzles/{id}[?format=text|html|printable]
/// Rating writes reach the ledger file before the response is sent.
class ReviewServer {
 public:
  /// Loads the corpus (CorpusUnreadable) and the ledger.
  explicit ReviewServer(ServeConfig cfg);
  ~ReviewServer();
  ReviewServer(const ReviewServer&) = delete;
  ReviewServer& operator=(const ReviewServer&) = delete;

  /// Binds and serves on a background thread; throws PortInUse.
  int start();
  /// Binds and blocks until stop().
  void run();
  void stop();

  int port() const;
  std::string base_url() const;
  RatingStore& store();
  const Corpus& corpus() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace eduverba
