#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <random>
#include <thread>

#include <httplib.h>
#include <unistd.h>

#include "cnim/classifier.hpp"
#include "cnim/oracle.hpp"
#include "cnim/service.hpp"

using namespace cnim;
using nlohmann::json;

namespace {

ServiceConfig test_config() {
  ServiceConfig c;
  c.seed = 12345;
  return c;
}

std::string create(GameService& svc, const json& body) {
  const Response r = svc.create_game(body);
  REQUIRE(r.status == 201);
  return r.body["id"].get<std::string>();
}

Position current(const json& state) {
  return Position(GameSpec{state["n"].get<int>(), state["k"].get<int>()}, state["heights"].get<std::vector<Height>>());
}

}  // namespace

TEST_SUITE("service") {

TEST_CASE("health and routing") {
  GameService svc(test_config());
  CHECK(svc.handle("GET", "/health", "").status == 200);
  CHECK(svc.handle("GET", "/health", "").body["status"] == "ok");
  CHECK(svc.handle("GET", "/nope", "").status == 404);
  CHECK(svc.handle("DELETE", "/games", "").status == 405);
  const Response bad = svc.handle("POST", "/games", "{not json");
  CHECK(bad.status == 400);
  CHECK(bad.body.contains("code"));
  CHECK(bad.body.contains("message"));
  CHECK(bad.body.contains("detail"));
}

TEST_CASE("creating games") {
  GameService svc(test_config());
  const Response r = svc.create_game({{"n", 7}, {"k", 4}, {"heights", {1, 7, 5, 6, 2, 3, 6}}});
  REQUIRE(r.status == 201);
  const json& s = r.body["state"];
  CHECK(s["heights"] == json({1, 7, 5, 6, 2, 3, 6}));
  CHECK(s["history"].empty());
  CHECK(s["to_move"] == "human");
  CHECK(s["status"] == "ongoing");
  CHECK(s["label"] == "None");

  CHECK(svc.create_game({{"n", 7}, {"k", 4}, {"heights", {0, 0, 0, 0, 0, 0, 0}}}).status == 400);
  CHECK(svc.create_game({{"n", 7}, {"k", 8}}).status == 400);
  CHECK(svc.create_game({{"n", 0}, {"k", 0}}).status == 400);
  CHECK(svc.create_game({{"n", 7}}).status == 400);
  CHECK(svc.create_game({{"n", 7}, {"k", 4}, {"heights", {1, 2, 3}}}).status == 400);
  CHECK(svc.create_game({{"n", 7}, {"k", 4}, {"heights", {1, 2, 3, 4, 5, 6, -7}}}).status == 400);
  CHECK(svc.create_game({{"n", 7}, {"k", 4}, {"heights", "1,2"}}).status == 400);
  CHECK(svc.create_game(json::array()).status == 400);

  for (int i = 0; i < 10; ++i) {
    const Response rnd = svc.create_game({{"n", 3}, {"k", 2}});
    REQUIRE(rnd.status == 201);
    const Position p = current(rnd.body["state"]);
    CHECK(p.spec() == GameSpec{3, 2});
    CHECK_FALSE(is_terminal(p));
    CHECK(p.max() <= test_config().random_height_bound);
  }
  // Random CN(7,4) starts are N-positions.
  for (int i = 0; i < 10; ++i) {
    const Response rnd = svc.create_game({{"n", 7}, {"k", 4}});
    CHECK(rnd.body["state"]["label"] == "None");
  }
}

TEST_CASE("a full exchange from (1,7,5,6,2,3,6)") {
  GameService svc(test_config());
  const std::string id = create(svc, {{"n", 7}, {"k", 4}, {"heights", {1, 7, 5, 6, 2, 3, 6}}});
  const Response r = svc.post_move(id, {{"window_start", 0}, {"new_heights", {0, 1, 5, 4}}});
  REQUIRE(r.status == 200);
  const json& hist = r.body["state"]["history"];
  REQUIRE(hist.size() == 2);
  CHECK(hist[0]["player"] == "human");
  CHECK(hist[0]["heights"] == json({0, 1, 5, 4, 2, 3, 6}));
  CHECK(hist[1]["player"] == "engine");
  REQUIRE(r.body.contains("engine_reply"));
  const Position after = current(r.body["state"]);
  CHECK(classify(after) != PSetLabel::None);
  CHECK(r.body["state"]["label"] != "None");

  const Response g = svc.get_game(id);
  CHECK(g.status == 200);
  CHECK(g.body["history"].size() == 2);
  CHECK(g.body["ply"] == 2);
}

TEST_CASE("move errors") {
  GameService svc(test_config());
  const std::string id = create(svc, {{"n", 7}, {"k", 4}, {"heights", {1, 7, 5, 6, 2, 3, 6}}});
  Response r = svc.post_move(id, {{"window_start", 0}, {"new_heights", {1, 7, 5, 6}}});
  CHECK(r.status == 422);
  CHECK(r.body["message"] == "no token removed");
  CHECK(r.body["detail"]["reason"] == "no_decrease");
  r = svc.post_move(id, {{"window_start", 0}, {"new_heights", {2, 7, 5, 6}}});
  CHECK(r.status == 422);
  CHECK(r.body["detail"]["reason"] == "floor_violation");
  r = svc.post_move(id, {{"window_start", 9}, {"new_heights", {0, 7, 5, 6}}});
  CHECK(r.status == 422);
  CHECK(r.body["detail"]["reason"] == "bad_window");
  r = svc.post_move(id, {{"window_start", -1}, {"new_heights", {0, 7, 5, 6}}});
  CHECK(r.body["detail"]["reason"] == "bad_window");
  r = svc.post_move(id, {{"window_start", 0}, {"new_heights", {0, 7, 5}}});
  CHECK(r.body["detail"]["reason"] == "wrong_length");
  CHECK(svc.post_move(id, {{"new_heights", {0, 7, 5, 6}}}).status == 400);
  CHECK(svc.post_move(id, {{"window_start", 0}, {"new_heights", {0, 7, 5, 6}}, {"ply", 3}}).status == 409);
  CHECK(svc.get_game(id).body["history"].empty());

  CHECK(svc.post_move("missing", {{"window_start", 0}, {"new_heights", {0, 7, 5, 6}}}).status == 404);
  CHECK(svc.get_game("missing").status == 404);
  CHECK(svc.handle("GET", "/games/missing", "").status == 404);
}

TEST_CASE("finished games refuse moves") {
  GameService svc(test_config());
  const std::string id = create(svc, {{"n", 7}, {"k", 4}, {"heights", {1, 0, 0, 0, 0, 0, 0}}});
  Response r = svc.post_move(id, {{"window_start", 0}, {"new_heights", {0, 0, 0, 0}}});
  REQUIRE(r.status == 200);
  CHECK_FALSE(r.body.contains("engine_reply"));
  CHECK(r.body["state"]["status"] == "finished");
  CHECK(r.body["state"]["winner"] == "human");
  r = svc.post_move(id, {{"window_start", 0}, {"new_heights", {0, 0, 0, 0}}});
  CHECK(r.status == 409);
}

TEST_CASE("engine moving first") {
  GameService svc(test_config());
  // N-position: the engine wins into S.
  Response r = svc.create_game({{"n", 7}, {"k", 4}, {"heights", {1, 7, 5, 6, 2, 3, 6}}, {"engine_first", true}});
  REQUIRE(r.status == 201);
  CHECK(r.body["state"]["history"].size() == 1);
  CHECK(classify(current(r.body["state"])) != PSetLabel::None);
  CHECK(r.body["state"]["to_move"] == "human");

  // P-position: one token off the first tallest stack.
  r = svc.create_game({{"n", 7}, {"k", 4}, {"heights", {1, 1, 4, 2, 3, 2, 4}}, {"engine_first", true}});
  REQUIRE(r.status == 201);
  CHECK(r.body["state"]["heights"] == json({1, 1, 3, 2, 3, 2, 4}));

  // A finished game after the engine's first move.
  r = svc.create_game({{"n", 3}, {"k", 2}, {"heights", {0, 2, 0}}, {"engine_first", true}});
  REQUIRE(r.status == 201);
  CHECK(r.body["state"]["status"] == "finished");
  CHECK(r.body["state"]["winner"] == "engine");
}

TEST_CASE("engine replies outside CN(7,4) come from the oracle") {
  GameService svc(test_config());
  const std::string id = create(svc, {{"n", 5}, {"k", 3}, {"heights", {6, 1, 5, 2, 4}}});
  const Response r = svc.post_move(id, {{"window_start", 0}, {"new_heights", {5, 1, 5}}});
  REQUIRE(r.status == 200);
  const Position before = current(json{{"n", 5}, {"k", 3}, {"heights", r.body["state"]["history"][0]["heights"]}});
  OutcomeTable cache(before.spec());
  const Position after = current(r.body["state"]);
  if (outcome(before, cache) == Outcome::N) CHECK(outcome(after, cache) == Outcome::P);
  CHECK(svc.engine_move(make_position({5, 3}, {5, 0, 5, 2, 2})).new_heights.size() == 3);
}

TEST_CASE("random games keep the session invariants") {
  GameService svc(test_config());
  std::mt19937 rng(77);
  for (int game = 0; game < 20; ++game) {
    const json spec = game % 2 ? json{{"n", 7}, {"k", 4}} : json{{"n", 5}, {"k", 3}};
    const Response c = svc.create_game(spec);
    REQUIRE(c.status == 201);
    const std::string id = c.body["id"];
    json state = c.body["state"];
    int guard = 0;
    while (state["status"] == "ongoing" && guard++ < 200) {
      const Position p = current(state);
      const auto moves = legal_moves(p);
      const Move& m = moves[std::uniform_int_distribution<std::size_t>(0, moves.size() - 1)(rng)];
      const Response r = svc.post_move(id, {{"window_start", m.window_start}, {"new_heights", m.new_heights}});
      REQUIRE(r.status == 200);
      const Position human = apply_move(p, m);
      if (r.body.contains("engine_reply")) {
        const Position reply = current(r.body["state"]);
        CHECK(move_between(human, reply).has_value());
        if (p.spec() == GameSpec{7, 4} && classify(human) == PSetLabel::None) {
          CHECK(classify(reply) != PSetLabel::None);
        }
      }
      state = r.body["state"];
    }
    CHECK(state["status"] == "finished");
    // Replaying the history reproduces the current position.
    Position replay = current(json{{"n", state["n"]}, {"k", state["k"]}, {"heights", state["initial"]}});
    for (const auto& e : state["history"]) {
      const Height before = replay.token_sum();
      replay = apply_move(replay, Move{e["window_start"].get<std::size_t>(), e["new_heights"].get<std::vector<Height>>()});
      CHECK(replay.token_sum() < before);
    }
    CHECK(replay == current(state));
  }
}

TEST_CASE("concurrent moves on one session: exactly one wins") {
  GameService svc(test_config());
  const std::string id = create(svc, {{"n", 7}, {"k", 4}, {"heights", {1, 7, 5, 6, 2, 3, 6}}});
  std::atomic<int> ok{0}, conflict{0}, other{0};
  std::vector<std::thread> threads;
  for (int i = 0; i < 8; ++i) {
    threads.emplace_back([&] {
      const Response r = svc.post_move(id, {{"window_start", 0}, {"new_heights", {0, 1, 5, 4}}, {"ply", 0}});
      (r.status == 200 ? ok : r.status == 409 ? conflict : other)++;
    });
  }
  for (auto& t : threads) t.join();
  CHECK(ok == 1);
  CHECK(conflict == 7);
  CHECK(other == 0);
  CHECK(svc.get_game(id).body["history"].size() == 2);
}

TEST_CASE("analyze") {
  GameService svc(test_config());
  Response r = svc.analyze({{"n", "7"}, {"k", "4"}, {"heights", "0,0,5,1,2,2,5"}});
  REQUIRE(r.status == 200);
  CHECK(r.body["outcome"] == "P");
  CHECK(r.body["label"] == "S1");
  CHECK(r.body["winning_moves"].empty());

  r = svc.analyze({{"n", "9"}, {"k", "5"}, {"heights", "2,2,2,2,2,2,2,2,2"}});
  REQUIRE(r.status == 200);
  CHECK(r.body["outcome"] == "N");
  CHECK_FALSE(r.body.contains("label"));
  CHECK_FALSE(r.body["winning_moves"].empty());

  r = svc.analyze({{"n", "7"}, {"k", "4"}, {"heights", "50,50,50,50,1,2,3"}});
  REQUIRE(r.status == 200);
  CHECK(r.body["outcome"] == "unknown(oracle ceiling)");
  CHECK(r.body["label"] == "None");
  REQUIRE(r.body["winning_moves"].size() == 1);

  r = svc.analyze({{"n", "7"}, {"k", "4"}, {"heights", "1,7,5,6,2,3,6"}});
  REQUIRE(r.status == 200);
  CHECK(r.body["outcome"] == "N");
  CHECK(r.body["winning_moves"].size() <= test_config().max_winning_moves);
  for (const auto& m : r.body["winning_moves"]) {
    CHECK(classify(Position({7, 4}, m["heights"].get<std::vector<Height>>())) != PSetLabel::None);
  }

  CHECK(svc.analyze({{"n", "9"}, {"k", "5"}, {"heights", "50,50,50,50,50,50,50,50,50"}}).status == 413);
  CHECK(svc.analyze({{"n", "7"}, {"k", "4"}, {"heights", "1,2"}}).status == 400);
  CHECK(svc.analyze({{"n", "7"}, {"k", "4"}, {"heights", "1,2,x,4,5,6,7"}}).status == 400);
  CHECK(svc.analyze({{"n", "7"}, {"k", "4"}}).status == 400);
  CHECK(svc.analyze({{"n", "7"}, {"k", "9"}, {"heights", "1,2,3,4,5,6,7"}}).status == 400);
  CHECK(svc.handle("GET", "/analyze", "", {{"n", "3"}, {"k", "2"}, {"heights", "2,2,2"}}).body["label"] == "S1");
}

TEST_CASE("sessions persist to JSON lines") {
  const auto dir = std::filesystem::temp_directory_path() / ("cnim_sessions_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  ServiceConfig cfg = test_config();
  cfg.persist_dir = dir;
  std::string id;
  json before;
  {
    GameService svc(cfg);
    id = create(svc, {{"n", 7}, {"k", 4}, {"heights", {1, 7, 5, 6, 2, 3, 6}}});
    REQUIRE(svc.post_move(id, {{"window_start", 0}, {"new_heights", {0, 1, 5, 4}}}).status == 200);
    before = svc.get_game(id).body;
  }
  CHECK(std::filesystem::exists(dir / (id + ".jsonl")));
  GameService restored(cfg);
  CHECK(restored.session_count() == 1);
  CHECK(restored.get_game(id).body == before);
  std::filesystem::remove_all(dir);
}

TEST_CASE("over HTTP") {
  GameService svc(test_config());
  HttpServer server(svc);
  const int port = server.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread loop([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  httplib::Client client("127.0.0.1", port);
  auto health = client.Get("/health");
  REQUIRE(health);
  CHECK(health->status == 200);
  CHECK(health->get_header_value("Access-Control-Allow-Origin") == "*");

  auto created = client.Post("/games", R"({"n":7,"k":4,"heights":[1,7,5,6,2,3,6]})", "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  const std::string id = json::parse(created->body)["id"];

  auto moved = client.Post("/games/" + id + "/moves", R"({"window_start":0,"new_heights":[0,1,5,4]})",
                           "application/json");
  REQUIRE(moved);
  CHECK(moved->status == 200);
  CHECK(json::parse(moved->body)["state"]["history"].size() == 2);

  auto illegal = client.Post("/games/" + id + "/moves", R"({"window_start":0,"new_heights":[9,9,9,9]})",
                             "application/json");
  REQUIRE(illegal);
  CHECK(illegal->status == 422);

  auto analyzed = client.Get("/analyze?n=7&k=4&heights=0,0,5,1,2,2,5");
  REQUIRE(analyzed);
  CHECK(json::parse(analyzed->body)["label"] == "S1");

  auto missing = client.Get("/games/doesnotexist");
  REQUIRE(missing);
  CHECK(missing->status == 404);

  server.stop();
  loop.join();
}

}
