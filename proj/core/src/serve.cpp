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

#include "eduverba/serve.hpp"

#include <httplib.h>

#include <charconv>
#include <fstream>
#include <thread>
#include <unordered_map>

#include "eduverba/error.hpp"
#include "eduverba/text.hpp"

namespace eduverba {
namespace fs = std::filesystem;

int best_rated_clue(std::span<const RatingRecord> latest, const std::string& example_id, int clue_count) {
  std::vector<double> sum(clue_count, 0.0);
  std::vector<int> n(clue_count, 0);
  for (const auto& r : latest) {
    if (r.example_id != example_id || r.clue_index < 0 || r.clue_index >= clue_count) continue;
    if (r.rating == Rating::Skip || r.rating == Rating::Empty) continue;
    sum[r.clue_index] += static_cast<double>(r.rating);
    ++n[r.clue_index];
  }
  int best = 0;
  auto rank = [&](int i) { return n[i] == 0 ? static_cast<double>(Rating::C) : sum[i] / n[i]; };
  for (int i = 1; i < clue_count; ++i) {
    if (rank(i) < rank(best)) best = i;
  }
  return best;
}

namespace {

void send_json(httplib::Response& res, int status, const nlohmann::ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view code, const std::string& message) {
  send_json(res, status, {{"error", {{"code", code}, {"message", message}}}});
}

int status_for(Errc code) {
  switch (code) {
    case Errc::UnknownExample: return 404;
    case Errc::CorpusUnreadable: return 500;
    default: return 400;
  }
}

std::size_t query_size(const httplib::Request& req, const char* key, std::size_t fallback) {
  if (!req.has_param(key)) return fallback;
  const std::string v = req.get_param_value(key);
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), value);
  if (ec != std::errc{} || ptr != v.data() + v.size()) throw Error(Errc::InvalidConfig, std::string(key) + " must be a non-negative integer");
  return value;
}

}  // namespace

struct ReviewServer::Impl {
  ServeConfig cfg;
  Corpus corpus;
  std::unordered_map<std::string, std::size_t> by_id;
  std::unique_ptr<RatingStore> store;
  httplib::Server server;
  std::thread thread;
  int port = -1;
  std::mutex puzzle_mu;

  nlohmann::ordered_json example_view(const ClueInstructExample& e, const std::optional<std::string>& annotator) const {
    nlohmann::ordered_json j;
    to_json(j, e);
    if (annotator) {
      nlohmann::ordered_json ratings = nlohmann::ordered_json::array();
      std::vector<std::optional<Rating>> latest(e.clues.size());
      for (const auto& r : store->latest()) {
        if (r.example_id == e.id && r.annotator == *annotator && r.clue_index >= 0 &&
            static_cast<std::size_t>(r.clue_index) < latest.size())
          latest[r.clue_index] = r.rating;
      }
      for (const auto& r : latest) ratings.push_back(r ? nlohmann::ordered_json(std::string(to_string(*r))) : nlohmann::ordered_json());
      j["ratings"] = ratings;
    }
    return j;
  }

  void routes() {
    server.Get("/api/examples", [this](const httplib::Request& req, httplib::Response& res) {
      try {
        const std::size_t offset = query_size(req, "offset", 0);
        const std::size_t limit = query_size(req, "limit", 20);
        std::optional<std::string> annotator;
        if (req.has_param("annotator")) annotator = req.get_param_value("annotator");
        nlohmann::ordered_json items = nlohmann::ordered_json::array();
        for (std::size_t i = offset; i < corpus.size() && i < offset + limit; ++i)
          items.push_back(example_view(corpus[i], annotator));
        send_json(res, 200, {{"total", corpus.size()}, {"offset", offset}, {"limit", limit}, {"items", items}});
      } catch (const Error& e) {
        send_error(res, 400, errc_name(e.code()), e.what());
      }
    });

    server.Get(R"(/api/examples/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
      const auto it = by_id.find(req.matches[1].str());
      if (it == by_id.end()) return send_error(res, 404, "UnknownExample", "no example '" + req.matches[1].str() + "'");
      std::optional<std::string> annotator;
      if (req.has_param("annotator")) annotator = req.get_param_value("annotator");
      send_json(res, 200, example_view(corpus[it->second], annotator));
    });

    server.Post("/api/ratings", [this](const httplib::Request& req, httplib::Response& res) {
      const auto body = nlohmann::json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.is_object())
        return send_error(res, 400, "MalformedRecord", "body must be a JSON object");
      try {
        RatingRecord rec;
        rec.example_id = body.at("example_id").get<std::string>();
        rec.clue_index = body.at("clue_index").get<int>();
        rec.rating = parse_rating(body.at("rating").get<std::string>());
        rec.annotator = body.at("annotator").get<std::string>();
        if (body.contains("model") && body["model"].is_string()) rec.model = body["model"].get<std::string>();
        const RatingRecord stored = store->record(std::move(rec));
        nlohmann::ordered_json ack = nlohmann::ordered_json::parse(ledger_line(stored));
        ack.erase("crc");
        send_json(res, 201, ack);
      } catch (const Error& e) {
        send_error(res, status_for(e.code()), errc_name(e.code()), e.what());
      } catch (const nlohmann::json::exception& e) {
        send_error(res, 400, "MalformedRecord", e.what());
      }
    });

    server.Get("/api/summary", [this](const httplib::Request& req, httplib::Response& res) {
      SummaryFilter filter;
      if (req.has_param("annotator")) filter.annotator = req.get_param_value("annotator");
      if (req.has_param("model")) filter.model = req.get_param_value("model");
      const auto latest = store->latest();
      auto body = to_json(summarize(latest, filter));
      nlohmann::ordered_json pairs = nlohmann::ordered_json::array();
      for (const auto& a : agreement(latest)) pairs.push_back(to_json(a));
      body["agreement"] = pairs;
      body["examples"] = corpus.size();
      send_json(res, 200, body);
    });

    server.Post("/api/puzzles", [this](const httplib::Request& req, httplib::Response& res) {
      const auto body = nlohmann::json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.is_object() || !body.contains("entry_ids") || !body["entry_ids"].is_array())
        return send_error(res, 400, "MalformedRecord", "body must carry an entry_ids array");
      try {
        AssembleConfig grid = cfg.grid;
        grid.max_rows = body.value("rows", grid.max_rows);
        grid.max_cols = body.value("cols", grid.max_cols);
        grid.seed = body.value("seed", grid.seed);
        const auto latest = store->latest();
        std::vector<GridEntry> entries;
        std::string key = std::to_string(grid.max_rows) + "x" + std::to_string(grid.max_cols) + "/" +
                          std::to_string(grid.seed);
        for (const auto& idj : body["entry_ids"]) {
          const auto id = idj.get<std::string>();
          const auto it = by_id.find(id);
          if (it == by_id.end()) return send_error(res, 404, "UnknownExample", "no example '" + id + "'");
          const auto& ex = corpus[it->second];
          const int clue = best_rated_clue(latest, id, static_cast<int>(ex.clues.size()));
          entries.push_back({ex.keyword, ex.clues.at(clue), id});
          key += "/" + id + "#" + std::to_string(clue);
        }
        const CrosswordLayout layout = assemble(entries, grid);
        const std::string puzzle_id = "pz-" + hex64(fnv1a64(key));
        auto doc = to_json(layout);
        {
          std::lock_guard lock(puzzle_mu);
          fs::create_directories(cfg.puzzles_dir);
          std::ofstream(cfg.puzzles_dir / (puzzle_id + ".json"), std::ios::binary | std::ios::trunc) << doc.dump(2)
                                                                                                     << '\n';
        }
        send_json(res, 201, {{"id", puzzle_id}, {"layout", doc}});
      } catch (const Error& e) {
        send_error(res, status_for(e.code()), errc_name(e.code()), e.what());
      } catch (const nlohmann::json::exception& e) {
        send_error(res, 400, "MalformedRecord", e.what());
      }
    });

    server.Get(R"(/api/puzzles/([A-Za-z0-9-]+))", [this](const httplib::Request& req, httplib::Response& res) {
      const fs::path file = cfg.puzzles_dir / (req.matches[1].str() + ".json");
      std::ifstream in(file, std::ios::binary);
      if (!in) return send_error(res, 404, "UnknownPuzzle", "no puzzle '" + req.matches[1].str() + "'");
      const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      if (!req.has_param("format")) {
        res.set_content(data, "application/json");
        return;
      }
      try {
        const auto format = parse_render_format(req.get_param_value("format"));
        const auto view = req.get_param_value("view") == "blank" ? RenderView::Blank : RenderView::Solution;
        const auto layout = layout_from_json(nlohmann::json::parse(data));
        res.set_content(render(layout, format, view),
                        format == RenderFormat::Text ? "text/plain; charset=utf-8" : "text/html; charset=utf-8");
      } catch (const Error& e) {
        send_error(res, 400, errc_name(e.code()), e.what());
      }
    });

    if (!cfg.ui_dir.empty()) {
      if (!server.set_mount_point("/", cfg.ui_dir.string()))
        throw Error(Errc::InvalidConfig, "UI directory '" + cfg.ui_dir.string() + "' does not exist");
    }
  }

  void bind() {
    // httplib's default also sets SO_REUSEPORT, which lets a second server share the port silently.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
    });
    if (cfg.port == 0) {
      port = server.bind_to_any_port(cfg.host);
    } else {
      port = server.bind_to_port(cfg.host, cfg.port) ? cfg.port : -1;
    }
    if (port < 0) throw Error(Errc::PortInUse, cfg.host + ":" + std::to_string(cfg.port) + " is not available");
  }
};

ReviewServer::ReviewServer(ServeConfig cfg) : impl_(std::make_unique<Impl>()) {
  impl_->cfg = std::move(cfg);
  auto& c = impl_->cfg;
  if (c.puzzles_dir.empty()) c.puzzles_dir = (c.ledger.has_parent_path() ? c.ledger.parent_path() : fs::path(".")) / "puzzles";
  impl_->corpus = read_corpus(c.corpus);
  std::unordered_set<std::string> ids;
  for (std::size_t i = 0; i < impl_->corpus.size(); ++i) {
    impl_->by_id.emplace(impl_->corpus[i].id, i);
    ids.insert(impl_->corpus[i].id);
  }
  impl_->store = std::make_unique<RatingStore>(c.ledger, std::move(ids));
  impl_->routes();
}

ReviewServer::~ReviewServer() { stop(); }

int ReviewServer::start() {
  impl_->bind();
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return impl_->port;
}

void ReviewServer::run() {
  impl_->bind();
  impl_->server.listen_after_bind();
}

void ReviewServer::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int ReviewServer::port() const { return impl_->port; }
std::string ReviewServer::base_url() const { return "http://" + impl_->cfg.host + ":" + std::to_string(impl_->port); }
RatingStore& ReviewServer::store() { return *impl_->store; }
const Corpus& ReviewServer::corpus() const { return impl_->corpus; }

}  // namespace eduverba
