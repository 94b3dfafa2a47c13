// service.cpp

#include "cnim/service.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <httplib.h>

#include "cnim/classifier.hpp"
#include "cnim/strategist.hpp"

namespace cnim {

namespace {

using nlohmann::json;

constexpr GameSpec kCN74{7, 4};
constexpr std::size_t kOracleCacheLimit = 8'000'000;

// Thrown while decoding a request; turned into a 400.
struct BadRequest {
  std::string message;
  json detail = json::object();
};

std::string_view player_name(Player p) { return p == Player::Human ? "human" : "engine"; }

std::string_view fault_code(MoveFault f) {
  switch (f) {
    case MoveFault::BadWindow: return "bad_window";
    case MoveFault::WrongLength: return "wrong_length";
    case MoveFault::Increase: return "floor_violation";
    case MoveFault::NoDecrease: return "no_decrease";
  }
  return "unknown";
}

json move_json(const Move& m, const Position& after) {
  return {{"window_start", m.window_start}, {"new_heights", m.new_heights}, {"heights", after.heights()}};
}

GameSpec spec_from(const json& body, int max_n) {
  if (!body.contains("n") || !body.contains("k")) throw BadRequest{"n and k are required"};
  if (!body["n"].is_number_integer() || !body["k"].is_number_integer()) throw BadRequest{"n and k must be integers"};
  const auto n = body["n"].get<std::int64_t>();
  const auto k = body["k"].get<std::int64_t>();
  if (n < 1 || n > max_n || k < 1 || k > n) {
    throw BadRequest{"invalid game", {{"n", n}, {"k", k}, {"max_n", max_n}}};
  }
  return GameSpec::make(static_cast<int>(n), static_cast<int>(k));
}

std::vector<Height> heights_from(const json& v, const char* field) {
  if (!v.is_array()) throw BadRequest{std::string(field) + " must be an array of integers"};
  std::vector<Height> out;
  for (const auto& h : v) {
    if (!h.is_number_integer()) throw BadRequest{std::string(field) + " must be an array of integers"};
    out.push_back(h.get<Height>());
  }
  return out;
}

std::int64_t parse_int(const std::string& s, const char* what) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw BadRequest{std::string("bad integer for ") + what, {{"value", s}}};
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

std::optional<std::string> closed_form_label(const Position& p) {
  if (p.spec() == kCN74) return std::string(to_string(classify(p)));
  if (p.spec() == GameSpec{3, 2} || p.spec() == GameSpec{5, 3}) return std::string(family_is_P(p) ? "S1" : "None");
  return std::nullopt;
}

Move max_stall(const Position& p) {
  const auto& h = p.heights();
  const auto top = static_cast<std::size_t>(std::max_element(h.begin(), h.end()) - h.begin());
  Move m{top, {}};
  for (int i = 0; i < p.spec().k; ++i) m.new_heights.push_back(h[(top + i) % h.size()]);
  m.new_heights[0] -= 1;
  return m;
}

}  // namespace

std::optional<Player> GameSession::winner() const {
  if (!finished() || history.empty()) return std::nullopt;
  return history.back().player;
}

json session_json(const GameSession& s) {
  json history = json::array();
  for (const auto& e : s.history) {
    json j = move_json(e.move, e.after);
    j["player"] = player_name(e.player);
    history.push_back(std::move(j));
  }
  json j{
      {"id", s.id},
      {"n", s.current.spec().n},
      {"k", s.current.spec().k},
      {"initial", s.initial.heights()},
      {"heights", s.current.heights()},
      {"history", history},
      {"ply", s.history.size()},
      {"to_move", player_name(s.to_move)},
      {"status", s.finished() ? "finished" : "ongoing"},
  };
  if (auto w = s.winner()) j["winner"] = player_name(*w);
  if (s.current.spec() == kCN74) j["label"] = to_string(classify(s.current));
  return j;
}

Response error_response(int status, const std::string& code, const std::string& message, json detail) {
  return {status, {{"code", code}, {"message", message}, {"detail", std::move(detail)}}};
}

GameService::GameService(ServiceConfig config) : config_(std::move(config)), rng_(config_.seed) {
  if (config_.persist_dir) {
    std::filesystem::create_directories(*config_.persist_dir);
    restore();
  }
}

std::size_t GameService::session_count() const {
  std::shared_lock lock(sessions_mutex_);
  return sessions_.size();
}

std::shared_ptr<GameService::Slot> GameService::find(const std::string& id) const {
  std::shared_lock lock(sessions_mutex_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::string GameService::new_id() {
  std::lock_guard lock(rng_mutex_);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string id;
  std::uint64_t v = rng_();
  for (int i = 0; i < 16; ++i, v >>= 4) id += kHex[v & 15];
  return id;
}

bool GameService::oracle_tractable(const Position& p) const {
  if (p.max() > OutcomeTable::kMaxKeyHeight) return false;
  double states = 1;
  for (Height h : p.heights()) states *= static_cast<double>(h + 1);
  return states / (2.0 * static_cast<double>(p.size())) <= config_.oracle_ceiling;
}

Outcome GameService::oracle_outcome(const Position& p) {
  std::lock_guard lock(oracle_mutex_);
  auto [it, fresh] = oracle_cache_.try_emplace({p.spec().n, p.spec().k}, p.spec());
  if (it->second.size() > kOracleCacheLimit) it->second = OutcomeTable(p.spec());
  return outcome(p, it->second);
}

std::vector<Move> GameService::oracle_winning(const Position& p) {
  std::lock_guard lock(oracle_mutex_);
  auto [it, fresh] = oracle_cache_.try_emplace({p.spec().n, p.spec().k}, p.spec());
  if (it->second.size() > kOracleCacheLimit) it->second = OutcomeTable(p.spec());
  return winning_options(p, it->second);
}

Move GameService::engine_move(const Position& p) {
  if (p.spec() == kCN74) {
    if (classify(p) != PSetLabel::None) return max_stall(p);
    return find_winning_move(p);
  }
  if (oracle_tractable(p)) {
    auto wins = oracle_winning(p);
    if (!wins.empty()) return wins.front();
  }
  return max_stall(p);
}

Position GameService::random_start(const GameSpec& spec) {
  constexpr int kTries = 32;
  std::optional<Position> last;
  for (int attempt = 0; attempt < kTries; ++attempt) {
    std::vector<Height> h(static_cast<std::size_t>(spec.n));
    {
      std::lock_guard lock(rng_mutex_);
      std::uniform_int_distribution<Height> dist(0, config_.random_height_bound);
      for (auto& x : h) x = dist(rng_);
    }
    Position p(spec, std::move(h));
    if (is_terminal(p)) continue;
    last = p;
    if (spec == kCN74) {
      if (classify(p) == PSetLabel::None) return p;
    } else if (!oracle_tractable(p) || oracle_outcome(p) == Outcome::N) {
      return p;
    }
  }
  if (last) return *last;
  std::vector<Height> one(static_cast<std::size_t>(spec.n), 0);
  one[0] = 1;
  return Position(spec, std::move(one));
}

void GameService::play_engine(GameSession& s) {
  const Move m = engine_move(s.current);
  Position after = apply_move(s.current, m);
  s.history.push_back({Player::Engine, m, after});
  s.current = std::move(after);
  s.to_move = Player::Human;
  persist(s, {{"event", "move"}, {"player", "engine"}, {"window_start", m.window_start}, {"new_heights", m.new_heights}});
}

void GameService::persist(const GameSession& s, const json& event) const {
  if (!config_.persist_dir) return;
  std::ofstream out(*config_.persist_dir / (s.id + ".jsonl"), std::ios::app);
  out << event.dump() << '\n';
}

void GameService::restore() {
  for (const auto& entry : std::filesystem::directory_iterator(*config_.persist_dir)) {
    if (entry.path().extension() != ".jsonl") continue;
    std::ifstream in(entry.path());
    std::string line;
    std::shared_ptr<Slot> slot;
    try {
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json ev = json::parse(line);
        if (ev.at("event") == "create") {
          const GameSpec spec = GameSpec::make(ev.at("n").get<int>(), ev.at("k").get<int>());
          Position start(spec, ev.at("heights").get<std::vector<Height>>());
          slot = std::make_shared<Slot>(GameSession{ev.at("id").get<std::string>(), start, start, {}, Player::Human});
        } else if (slot && ev.at("event") == "move") {
          GameSession& s = slot->session;
          Move m{ev.at("window_start").get<std::size_t>(), ev.at("new_heights").get<std::vector<Height>>()};
          Position after = apply_move(s.current, m);
          s.history.push_back({ev.at("player") == "engine" ? Player::Engine : Player::Human, m, after});
          s.current = std::move(after);
        }
      }
    } catch (const std::exception&) {
      continue;  // unreadable log: skip the session
    }
    if (!slot) continue;
    GameSession& s = slot->session;
    // A log ending on a human move lost its engine reply.
    const bool engine_owed = !s.finished() && (s.history.empty() ? false : s.history.back().player == Player::Human);
    if (engine_owed) play_engine(s);
    sessions_[s.id] = slot;
  }
}

Response GameService::create_game(const json& body) {
  try {
    if (!body.is_object()) throw BadRequest{"request body must be a JSON object"};
    const GameSpec spec = spec_from(body, config_.max_n);
    std::optional<Position> start;
    if (body.contains("heights") && !body["heights"].is_null()) {
      auto h = heights_from(body["heights"], "heights");
      if (h.size() != static_cast<std::size_t>(spec.n)) {
        throw BadRequest{"heights must have n entries", {{"expected", spec.n}, {"got", h.size()}}};
      }
      if (std::any_of(h.begin(), h.end(), [](Height x) { return x < 0; })) throw BadRequest{"heights must be non-negative"};
      start.emplace(spec, std::move(h));
      if (is_terminal(*start)) throw BadRequest{"cannot start at the terminal position"};
    } else {
      start = random_start(spec);
    }
    bool engine_first = false;
    if (body.contains("engine_first")) {
      if (!body["engine_first"].is_boolean()) throw BadRequest{"engine_first must be a boolean"};
      engine_first = body["engine_first"].get<bool>();
    }

    auto slot = std::make_shared<Slot>(
        GameSession{new_id(), *start, *start, {}, engine_first ? Player::Engine : Player::Human});
    GameSession& s = slot->session;
    persist(s, {{"event", "create"}, {"id", s.id}, {"n", spec.n}, {"k", spec.k}, {"heights", start->heights()}});
    if (engine_first) play_engine(s);
    json state = session_json(s);
    {
      std::unique_lock lock(sessions_mutex_);
      sessions_[s.id] = slot;
    }
    return {201, {{"id", s.id}, {"state", std::move(state)}}};
  } catch (const BadRequest& e) {
    return error_response(400, "bad_request", e.message, e.detail);
  } catch (const Error& e) {
    return error_response(400, "bad_request", e.what());
  }
}

Response GameService::post_move(const std::string& id, const json& body) {
  auto slot = find(id);
  if (!slot) return error_response(404, "not_found", "no game with id " + id, {{"id", id}});
  std::unique_lock lock(slot->mutex, std::try_to_lock);
  if (!lock) return error_response(409, "busy", "another move on this game is in progress", {{"id", id}});
  GameSession& s = slot->session;
  if (s.finished()) return error_response(409, "finished", "the game is over", {{"id", id}});
  if (s.to_move != Player::Human) return error_response(409, "not_your_turn", "the engine is to move", {{"id", id}});

  Move m;
  try {
    if (!body.is_object()) throw BadRequest{"request body must be a JSON object"};
    if (!body.contains("window_start") || !body["window_start"].is_number_integer()) {
      throw BadRequest{"window_start must be an integer"};
    }
    if (!body.contains("new_heights")) throw BadRequest{"new_heights is required"};
    if (body.contains("ply")) {
      if (!body["ply"].is_number_integer()) throw BadRequest{"ply must be an integer"};
      const auto ply = body["ply"].get<std::int64_t>();
      if (ply != static_cast<std::int64_t>(s.history.size())) {
        return error_response(409, "stale", "the game has moved on",
                              {{"expected_ply", s.history.size()}, {"got_ply", ply}});
      }
    }
    const auto w = body["window_start"].get<std::int64_t>();
    m.window_start = w < 0 ? s.current.size() : static_cast<std::size_t>(w);
    m.new_heights = heights_from(body["new_heights"], "new_heights");
  } catch (const BadRequest& e) {
    return error_response(400, "bad_request", e.message, e.detail);
  }

  if (auto fault = check_move(s.current, m)) {
    return error_response(422, "illegal_move", std::string(to_string(*fault)),
                          {{"reason", fault_code(*fault)}, {"window_start", body["window_start"]}});
  }
  Position after = apply_move(s.current, m);
  s.history.push_back({Player::Human, m, after});
  s.current = std::move(after);
  s.to_move = Player::Engine;
  persist(s, {{"event", "move"}, {"player", "human"}, {"window_start", m.window_start}, {"new_heights", m.new_heights}});

  json out = json::object();
  if (s.finished()) {
    s.to_move = Player::Human;
  } else {
    play_engine(s);
    const auto& reply = s.history.back();
    out["engine_reply"] = move_json(reply.move, reply.after);
  }
  out["state"] = session_json(s);
  return {200, std::move(out)};
}

Response GameService::get_game(const std::string& id) const {
  auto slot = find(id);
  if (!slot) return error_response(404, "not_found", "no game with id " + id, {{"id", id}});
  std::lock_guard lock(slot->mutex);
  return {200, session_json(slot->session)};
}

Response GameService::analyze(const std::map<std::string, std::string>& query) {
  try {
    json spec_body = json::object();
    for (const char* key : {"n", "k"}) {
      auto it = query.find(key);
      if (it == query.end()) throw BadRequest{"n, k and heights are required"};
      spec_body[key] = parse_int(it->second, key);
    }
    const GameSpec spec = spec_from(spec_body, config_.max_n);
    auto it = query.find("heights");
    if (it == query.end()) throw BadRequest{"n, k and heights are required"};
    std::vector<Height> h;
    for (const auto& part : split(it->second, ',')) h.push_back(parse_int(part, "heights"));
    if (h.size() != static_cast<std::size_t>(spec.n)) {
      throw BadRequest{"heights must have n entries", {{"expected", spec.n}, {"got", h.size()}}};
    }
    if (std::any_of(h.begin(), h.end(), [](Height x) { return x < 0; })) throw BadRequest{"heights must be non-negative"};
    const Position p(spec, std::move(h));

    json out{{"n", spec.n}, {"k", spec.k}, {"heights", p.heights()}};
    const auto label = closed_form_label(p);
    if (label) out["label"] = *label;

    json moves = json::array();
    if (oracle_tractable(p)) {
      out["outcome"] = to_string(oracle_outcome(p));
      for (const Move& m : oracle_winning(p)) {
        if (moves.size() >= config_.max_winning_moves) break;
        moves.push_back(move_json(m, apply_move(p, m)));
      }
    } else if (label) {
      out["outcome"] = "unknown(oracle ceiling)";
      if (spec == kCN74 && *label == "None") {
        const Move m = find_winning_move(p);
        moves.push_back(move_json(m, apply_move(p, m)));
      }
    } else {
      return error_response(413, "too_large", "position exceeds the oracle ceiling and no closed form applies",
                            {{"ceiling", config_.oracle_ceiling}});
    }
    out["winning_moves"] = std::move(moves);
    return {200, std::move(out)};
  } catch (const BadRequest& e) {
    return error_response(400, "bad_request", e.message, e.detail);
  } catch (const Error& e) {
    return error_response(400, "bad_request", e.what());
  }
}

Response GameService::health() const { return {200, {{"status", "ok"}, {"sessions", session_count()}}}; }

Response GameService::handle(const std::string& method, const std::string& path, const std::string& body,
                             const std::map<std::string, std::string>& query) {
  std::vector<std::string> parts;
  for (auto& p : split(path, '/')) {
    if (!p.empty()) parts.push_back(std::move(p));
  }
  auto parse_body = [&]() -> std::optional<json> {
    if (body.empty()) return json::object();
    auto j = json::parse(body, nullptr, false);
    if (j.is_discarded()) return std::nullopt;
    return j;
  };
  auto bad_json = [] { return error_response(400, "bad_request", "request body is not valid JSON"); };
  auto wrong_method = [&] { return error_response(405, "method_not_allowed", method + " not allowed on " + path); };

  if (parts.size() == 1 && parts[0] == "health") return method == "GET" ? health() : wrong_method();
  if (parts.size() == 1 && parts[0] == "analyze") return method == "GET" ? analyze(query) : wrong_method();
  if (!parts.empty() && parts[0] == "games") {
    if (parts.size() == 1) {
      if (method != "POST") return wrong_method();
      auto j = parse_body();
      return j ? create_game(*j) : bad_json();
    }
    if (parts.size() == 2) return method == "GET" ? get_game(parts[1]) : wrong_method();
    if (parts.size() == 3 && parts[2] == "moves") {
      if (method != "POST") return wrong_method();
      auto j = parse_body();
      return j ? post_move(parts[1], *j) : bad_json();
    }
  }
  return error_response(404, "not_found", "no route for " + method + " " + path);
}

// ---- httplib adapter --------------------------------------------------------

struct HttpServer::Impl {
  GameService& service;
  httplib::Server server;

  explicit Impl(GameService& s) : service(s) {
    server.set_payload_max_length(1 << 20);
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Content-Type"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
    auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
      std::map<std::string, std::string> query;
      for (const auto& [k, v] : req.params) query.emplace(k, v);
      Response r;
      try {
        r = service.handle(req.method, req.path, req.body, query);
      } catch (const std::exception& e) {
        r = error_response(500, "internal", e.what());
      }
      res.status = r.status;
      res.set_content(r.body.dump(), "application/json");
    };
    server.Get(".*", dispatch);
    server.Post(".*", dispatch);
    server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  }
};

HttpServer::HttpServer(GameService& service) : impl_(std::make_unique<Impl>(service)) {}
HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen_after_bind() { return impl_->server.listen_after_bind(); }
void HttpServer::stop() { impl_->server.stop(); }
void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace cnim
