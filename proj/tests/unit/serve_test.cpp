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

#include <httplib.h>

#include "eduverba/serve.hpp"
#include "test_support.hpp"

namespace eduverba {
namespace {

class ServeTest : public ::testing::Test {
 protected:
  void SetUp() override {
    corpus_ = testing::synthetic_corpus(5, 17);
    write_corpus(dir_ / "corpus.jsonl", corpus_);
    ServeConfig cfg;
    cfg.port = 0;
    cfg.corpus = dir_ / "corpus.jsonl";
    cfg.ledger = dir_ / "ratings.jsonl";
    cfg.ui_dir = dir_ / "ui";
    testing::write_file(dir_ / "ui" / "index.html", "<html>review</html>");
    server_ = std::make_unique<ReviewServer>(cfg);
    server_->start();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", server_->port());
  }

  nlohmann::json get_json(const std::string& path, int expect = 200) {
    auto res = client_->Get(path);
    EXPECT_TRUE(res);
    EXPECT_EQ(res->status, expect) << path << ": " << res->body;
    return nlohmann::json::parse(res->body);
  }

  httplib::Result post(const std::string& path, const nlohmann::json& body) {
    return client_->Post(path, body.dump(), "application/json");
  }

  nlohmann::json rating(int example, int clue, const std::string& r, const std::string& who = "ann") {
    return {{"example_id", corpus_[example].id}, {"clue_index", clue}, {"rating", r}, {"annotator", who}};
  }

  testing::TempDir dir_;
  Corpus corpus_;
  std::unique_ptr<ReviewServer> server_;
  std::unique_ptr<httplib::Client> client_;
};

TEST_F(ServeTest, PagedExamples) {
  const auto page = get_json("/api/examples?offset=0&limit=2");
  EXPECT_EQ(page["total"], 5);
  ASSERT_EQ(page["items"].size(), 2u);
  EXPECT_EQ(page["items"][0]["id"], corpus_[0].id);
  EXPECT_EQ(get_json("/api/examples?offset=4&limit=10")["items"].size(), 1u);
  EXPECT_EQ(get_json("/api/examples?offset=abc", 400)["error"]["code"], "InvalidConfig");
}

TEST_F(ServeTest, SingleExample) {
  const auto one = get_json("/api/examples/" + corpus_[2].id);
  EXPECT_EQ(one["keyword"], corpus_[2].keyword);
  EXPECT_EQ(one["clues"].size(), 3u);
  EXPECT_EQ(get_json("/api/examples/ci-missing", 404)["error"]["code"], "UnknownExample");
}

TEST_F(ServeTest, RatingRoundTripReachesLedgerBeforeResponse) {
  auto res = post("/api/ratings", rating(1, 2, "A"));
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 201);
  EXPECT_EQ(nlohmann::json::parse(res->body)["rating"], "A");
  // Durable before the response: the file already holds the record.
  EXPECT_EQ(load_ledger(dir_ / "ratings.jsonl").records.size(), 1u);
  const auto summary = get_json("/api/summary");
  EXPECT_EQ(summary["total"], 1);
  EXPECT_EQ(summary["examples"], 5);

  const auto view = get_json("/api/examples/" + corpus_[1].id + "?annotator=ann");
  EXPECT_TRUE(view["ratings"][0].is_null());
  EXPECT_EQ(view["ratings"][2], "A");
}

TEST_F(ServeTest, RatingErrors) {
  auto unknown = rating(0, 0, "A");
  unknown["example_id"] = "ci-does-not-exist";
  EXPECT_EQ(post("/api/ratings", unknown)->status, 404);
  EXPECT_EQ(post("/api/ratings", rating(0, 5, "A"))->status, 400);
  EXPECT_EQ(post("/api/ratings", rating(0, 0, "Z"))->status, 400);
  EXPECT_EQ(post("/api/ratings", rating(0, 0, "EMPTY"))->status, 400);
  EXPECT_EQ(client_->Post("/api/ratings", "not json", "application/json")->status, 400);
  EXPECT_EQ(post("/api/ratings", {{"example_id", corpus_[0].id}})->status, 400);
  EXPECT_TRUE(load_ledger(dir_ / "ratings.jsonl").records.empty());
}

TEST_F(ServeTest, SummaryFilterAndAgreement) {
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(post("/api/ratings", rating(i, 0, "A", "kim"))->status, 201);
    EXPECT_EQ(post("/api/ratings", rating(i, 0, i == 2 ? "C" : "A", "lee"))->status, 201);
  }
  const auto all = get_json("/api/summary");
  EXPECT_EQ(all["total"], 6);
  EXPECT_EQ(get_json("/api/summary?annotator=kim")["total"], 3);
  ASSERT_EQ(all["agreement"].size(), 1u);
  EXPECT_EQ(all["agreement"][0]["shared"], 3);
}

TEST_F(ServeTest, PuzzleAssemblyAndRendering) {
  std::vector<std::string> ids;
  for (const auto& e : corpus_) ids.push_back(e.id);
  post("/api/ratings", rating(0, 1, "A"));
  post("/api/ratings", rating(0, 0, "D"));
  auto res = post("/api/puzzles", {{"entry_ids", ids}, {"rows", 15}, {"cols", 15}, {"seed", 3}});
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 201) << res->body;
  const auto created = nlohmann::json::parse(res->body);
  const std::string id = created["id"];
  EXPECT_TRUE(id.starts_with("pz-"));
  const auto stored = get_json("/api/puzzles/" + id);
  EXPECT_EQ(stored, created["layout"]);
  bool used_best = false;
  for (const auto& p : stored["placements"])
    if (p["id"] == corpus_[0].id) used_best = p["clue"] == corpus_[0].clues[1];
  for (const auto& u : stored["unplaced"])
    if (u["id"] == corpus_[0].id) used_best = u["clue"] == corpus_[0].clues[1];
  EXPECT_TRUE(used_best);

  auto text = client_->Get("/api/puzzles/" + id + "?format=text");
  EXPECT_EQ(text->status, 200);
  EXPECT_EQ(parse_text_grid(text->body), layout_from_json(stored).cell_letters());
  auto html = client_->Get("/api/puzzles/" + id + "?format=html&view=blank");
  EXPECT_NE(html->body.find("<table"), std::string::npos);
  EXPECT_EQ(client_->Get("/api/puzzles/pz-unknown")->status, 404);
  EXPECT_EQ(post("/api/puzzles", {{"entry_ids", {"ci-nope"}}})->status, 404);
  EXPECT_EQ(post("/api/puzzles", {{"ids", ids}})->status, 400);
}

TEST_F(ServeTest, ServesUiAssets) {
  auto res = client_->Get("/index.html");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->body, "<html>review</html>");
}

TEST_F(ServeTest, ReloadSeesPersistedRatings) {
  post("/api/ratings", rating(3, 1, "B"));
  server_->stop();
  ServeConfig cfg;
  cfg.port = 0;
  cfg.corpus = dir_ / "corpus.jsonl";
  cfg.ledger = dir_ / "ratings.jsonl";
  ReviewServer again(cfg);
  EXPECT_EQ(again.store().summary().count(Rating::B), 1u);
}

TEST(Serve, PortInUseAndUnreadableCorpus) {
  testing::TempDir dir;
  write_corpus(dir / "c.jsonl", testing::synthetic_corpus(2, 1));
  ServeConfig cfg;
  cfg.port = 0;
  cfg.corpus = dir / "c.jsonl";
  cfg.ledger = dir / "l.jsonl";
  ReviewServer first(cfg);
  const int port = first.start();
  cfg.port = port;
  ReviewServer second(cfg);
  try {
    second.start();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::PortInUse);
  }
  cfg.corpus = dir / "missing.jsonl";
  try {
    ReviewServer bad(cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::CorpusUnreadable);
  }
}

TEST(BestRatedClue, LowestMeanRank) {
  auto r = [](int clue, Rating rating, std::string who) {
    RatingRecord rec;
    rec.example_id = "x";
    rec.clue_index = clue;
    rec.rating = rating;
    rec.annotator = std::move(who);
    return rec;
  };
  EXPECT_EQ(best_rated_clue({}, "x"), 0);
  std::vector<RatingRecord> latest = {r(0, Rating::C, "a"), r(1, Rating::A, "a"), r(1, Rating::C, "b"),
                                      r(2, Rating::B, "a")};
  // Means: clue 0 is C, clue 1 averages to B, clue 2 is B; the tie goes to the lower index.
  EXPECT_EQ(best_rated_clue(latest, "x"), 1);
  EXPECT_EQ(best_rated_clue(std::vector{r(2, Rating::E, "a")}, "x"), 0);
}

}  // namespace
}  // namespace eduverba
