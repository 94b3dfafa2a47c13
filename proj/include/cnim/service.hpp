// service.hpp
//
// Game sessions, analysis and engine replies over HTTP/JSON.  GameService
// is transport-free (method, path, body in; status and JSON out) so it can
// be driven directly in tests; HttpServer binds it to cpp-httplib.

#ifndef CNIM_SERVICE_HPP
#define CNIM_SERVICE_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>
#include <vector>

#include <json.hpp>

#include "cnim/game.hpp"
#include "cnim/oracle.hpp"

namespace cnim {

struct ServiceConfig {
  int random_height_bound = 6;
  // Largest estimated canonical state count (prod(h+1) / 2n) the oracle is
  // asked to solve on a request.
  double oracle_ceiling = 2e6;
  std::size_t max_winning_moves = 8;
  int max_n = 16;
  // When set, each session appends its events to <dir>/<id>.jsonl and
  // existing files are replayed on construction.
  std::optional<std::filesystem::path> persist_dir;
  std::uint64_t seed = std::random_device{}();
};

struct Response {
  int status = 200;
  nlohmann::json body;
};

enum class Player { Human, Engine };

struct HistoryEntry {
  Player player;
  Move move;
  Position after;
};

struct GameSession {
  std::string id;
  Position initial;
  Position current;
  std::vector<HistoryEntry> history;
  Player to_move = Player::Human;

  bool finished() const { return is_terminal(current); }
  // Whoever took the last token wins.
  std::optional<Player> winner() const;
};

nlohmann::json session_json(const GameSession& s);

class GameService {
public:
  explicit GameService(ServiceConfig config = {});

  Response create_game(const nlohmann::json& body);
  Response post_move(const std::string& id, const nlohmann::json& body);
  Response get_game(const std::string& id) const;
  Response analyze(const std::map<std::string, std::string>& query);
  Response health() const;

  // Routing on method and path; body is raw JSON text.
  Response handle(const std::string& method, const std::string& path, const std::string& body,
                  const std::map<std::string, std::string>& query = {});

  // The engine's choice at p: a winning move when one is known, otherwise
  // one token off the first tallest stack.
  Move engine_move(const Position& p);
  bool oracle_tractable(const Position& p) const;

  std::size_t session_count() const;

private:
  struct Slot {
    explicit Slot(GameSession s) : session(std::move(s)) {}
    std::mutex mutex;
    GameSession session;
  };

  std::shared_ptr<Slot> find(const std::string& id) const;
  Outcome oracle_outcome(const Position& p);
  std::vector<Move> oracle_winning(const Position& p);
  void play_engine(GameSession& s);
  void persist(const GameSession& s, const nlohmann::json& event) const;
  void restore();
  std::string new_id();
  Position random_start(const GameSpec& spec);

  ServiceConfig config_;
  mutable std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
  std::mutex rng_mutex_;
  std::mt19937_64 rng_;
  std::mutex oracle_mutex_;
  std::map<std::pair<int, int>, OutcomeTable> oracle_cache_;
};

Response error_response(int status, const std::string& code, const std::string& message,
                        nlohmann::json detail = nlohmann::json::object());

class HttpServer {
public:
  explicit HttpServer(GameService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Returns the bound port (port 0 picks a free one), or -1 on failure.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cnim

#endif  // CNIM_SERVICE_HPP
