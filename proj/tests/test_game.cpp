#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "cnim/game.hpp"
#include "naive_oracle.hpp"

using namespace cnim;

namespace {

const GameSpec cn74{7, 4};

std::set<std::vector<Height>> successor_set(const Position& p) {
  std::set<std::vector<Height>> out;
  for (const Move& m : legal_moves(p)) out.insert(apply_move(p, m).heights());
  return out;
}

}  // namespace

TEST_SUITE("game") {

TEST_CASE("make_position validates length and sign") {
  const Position p = make_position(cn74, {1, 7, 5, 6, 2, 3, 6});
  CHECK(p.heights() == std::vector<Height>{1, 7, 5, 6, 2, 3, 6});
  CHECK(is_terminal(make_position(cn74, {0, 0, 0, 0, 0, 0, 0})));
  CHECK_THROWS_AS(make_position(cn74, {1, 2, 3}), InvalidPosition);
  CHECK_THROWS_AS(make_position(cn74, {1, 2, 3, 4, 5, 6, -1}), InvalidPosition);
  CHECK_THROWS_AS(GameSpec::make(3, 4), InvalidPosition);
  CHECK_THROWS_AS(GameSpec::make(0, 0), InvalidPosition);
}

TEST_CASE("is_terminal") {
  CHECK_FALSE(is_terminal(make_position(cn74, {0, 0, 0, 1, 0, 0, 0})));
  CHECK_FALSE(is_terminal(make_position(cn74, {1, 7, 5, 6, 2, 3, 6})));
}

TEST_CASE("legal_moves on small positions") {
  CHECK(legal_moves(make_position(cn74, {0, 0, 0, 0, 0, 0, 0})).empty());

  const Position single = make_position(cn74, {1, 0, 0, 0, 0, 0, 0});
  const auto moves = legal_moves(single);
  CHECK(moves.size() == 4);  // the four windows containing stack 0
  for (const Move& m : moves) CHECK(is_terminal(apply_move(single, m)));

  const Position p = make_position({3, 2}, {1, 1, 0});
  const auto succ = successor_set(p);
  CHECK(succ == std::set<std::vector<Height>>{{0, 1, 0}, {1, 0, 0}, {0, 0, 0}});
}

TEST_CASE("legal_moves matches an independent generator") {
  std::mt19937 rng(7);
  for (const auto& [n, k] : {std::pair{7, 4}, {3, 2}, {5, 3}, {4, 4}, {5, 1}}) {
    for (int trial = 0; trial < 40; ++trial) {
      std::vector<Height> h(n);
      for (auto& x : h) x = std::uniform_int_distribution<Height>(0, 3)(rng);
      const Position p(GameSpec{n, k}, h);
      std::multiset<std::vector<Height>> ours, theirs;
      for (const Move& m : legal_moves(p)) ours.insert(apply_move(p, m).heights());
      naive::successors(h, k, [&](const naive::Heights& s) { theirs.insert(s); });
      CHECK(ours == theirs);
    }
  }
}

TEST_CASE("apply_move: worked move and basic faults") {
  const Position p = make_position(cn74, {1, 7, 5, 6, 2, 3, 6});
  // Window g,a,b,c: stacks 6,0,1,2.  Window a,b,c,d reaches all changed stacks too.
  const auto m = move_between(p, make_position(cn74, {0, 1, 5, 4, 2, 3, 6}));
  REQUIRE(m.has_value());
  CHECK(apply_move(p, *m).heights() == std::vector<Height>{0, 1, 5, 4, 2, 3, 6});
  CHECK_FALSE(check_move(p, Move{0, {0, 1, 5, 4}}).has_value());

  CHECK(check_move(p, Move{0, {1, 7, 5, 6}}) == MoveFault::NoDecrease);
  CHECK_THROWS_AS(apply_move(p, Move{0, {1, 7, 5, 6}}), IllegalMove);
  CHECK(check_move(p, Move{0, {2, 7, 5, 6}}) == MoveFault::Increase);
  CHECK(check_move(p, Move{0, {-1, 7, 5, 6}}) == MoveFault::Increase);
  CHECK(check_move(p, Move{7, {0, 7, 5, 6}}) == MoveFault::BadWindow);
  CHECK(check_move(p, Move{0, {0, 7, 5}}) == MoveFault::WrongLength);
  try {
    apply_move(p, Move{0, {1, 7, 5, 6}});
  } catch (const IllegalMove& e) {
    CHECK(e.fault() == MoveFault::NoDecrease);
    CHECK(to_string(e.fault()) == "no token removed");
  }

  const Position twos = make_position(cn74, {2, 2, 2, 2, 2, 2, 2});
  CHECK(apply_move(twos, Move{0, {0, 0, 0, 0}}).heights() == std::vector<Height>{0, 0, 0, 0, 2, 2, 2});
  // Windows wrap around the circle.
  CHECK(apply_move(twos, Move{5, {1, 1, 1, 1}}).heights() == std::vector<Height>{1, 1, 2, 2, 2, 1, 1});
}

TEST_CASE("move_between") {
  const Position p = make_position(cn74, {2, 2, 2, 2, 2, 2, 2});
  CHECK_FALSE(move_between(p, p).has_value());
  CHECK_FALSE(move_between(p, make_position(cn74, {1, 2, 1, 2, 2, 1, 2})).has_value());  // no 4-window covers 0, 2, 5
  CHECK_FALSE(move_between(p, make_position(cn74, {3, 2, 2, 2, 2, 2, 2})).has_value());
  const auto m = move_between(p, make_position(cn74, {1, 2, 2, 2, 2, 2, 1}));
  REQUIRE(m.has_value());
  CHECK(m->window_start == 4);
  CHECK(m->new_heights == std::vector<Height>{2, 2, 1, 1});
  CHECK(move_between(p, make_position(cn74, {1, 2, 2, 2, 1, 2, 2}))->window_start == 4);
}

TEST_CASE("transform conventions") {
  const Position p = make_position(cn74, {1, 2, 3, 4, 5, 6, 7});
  CHECK(transform(p, {0, false}) == p);
  CHECK(transform(p, {1, false}).heights() == std::vector<Height>{7, 1, 2, 3, 4, 5, 6});
  CHECK(transform(p, {0, true}).heights() == std::vector<Height>{1, 7, 6, 5, 4, 3, 2});
  CHECK(all_transforms(7).size() == 14);
  for (const auto& t : all_transforms(7)) {
    CHECK(transform(transform(p, t), inverse(t, 7)) == p);
  }
}

TEST_CASE("canonicalize") {
  const Position sample = make_position(cn74, {1, 7, 5, 6, 2, 3, 6});
  CHECK(canonicalize(make_position(cn74, {6, 2, 3, 6, 1, 7, 5})) == canonicalize(sample));
  const Position zero = make_position(cn74, {0, 0, 0, 0, 0, 0, 0});
  CHECK(canonicalize(zero) == zero);
  CHECK(canonicalize(make_position(cn74, {5, 0, 0, 3, 2, 1, 3})).heights() ==
        std::vector<Height>{0, 0, 3, 2, 1, 3, 5});
}

TEST_CASE("canonicalize is idempotent and symmetry-invariant") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Height> h(7);
    for (auto& x : h) x = std::uniform_int_distribution<Height>(0, 4)(rng);
    const Position p(cn74, h);
    const Position c = canonicalize(p);
    CHECK(canonicalize(c) == c);
    for (const auto& t : all_transforms(7)) {
      const Position q = transform(p, t);
      CHECK(canonicalize(q) == c);
      CHECK(q.heights() >= c.heights());
    }
  }
}

TEST_CASE("move invariants") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<Height> h(7);
    for (auto& x : h) x = std::uniform_int_distribution<Height>(0, 3)(rng);
    const Position p(cn74, h);
    const auto moves = legal_moves(p);
    CHECK(moves.empty() == is_terminal(p));
    for (const Move& m : moves) {
      const Position q = apply_move(p, m);
      CHECK(q.token_sum() < p.token_sum());
      for (std::size_t i = 0; i < 7; ++i) {
        const bool inside = (i + 7 - m.window_start) % 7 < 4;
        if (!inside) CHECK(q.heights()[i] == p.heights()[i]);
      }
    }
  }
}

TEST_CASE("successor set commutes with symmetry") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Height> h(7);
    for (auto& x : h) x = std::uniform_int_distribution<Height>(0, 2)(rng);
    const Position p(cn74, h);
    auto canon = [](const Position& x) {
      std::set<std::vector<Height>> out;
      for (const Move& m : legal_moves(x)) out.insert(canonicalize(apply_move(x, m)).heights());
      return out;
    };
    const auto base = canon(p);
    for (const auto& t : all_transforms(7)) CHECK(canon(transform(p, t)) == base);
  }
}

TEST_CASE("text format") {
  const Position p = parse_position("CN(7,4):1,7,5,6,2,3,6");
  CHECK(p == make_position(cn74, {1, 7, 5, 6, 2, 3, 6}));
  CHECK(format_position(p) == "CN(7,4):1,7,5,6,2,3,6");
  for (const char* s : {"CN(7,4):0,0,0,0,0,0,0", "CN(3,2):4,4,4", "CN(9,5):4,0,0,0,4,1,1,1,1"}) {
    CHECK(format_position(parse_position(s)) == s);
  }
  for (const char* bad : {"CN(7,4):1,7,5", "CN(7,4):1,7,5,6,2,3,x", "CN(7,4) :1,7,5,6,2,3,6", "CN(7,4):1,7,5,6,2,3,6,",
                          "CN(7,4):1, 7,5,6,2,3,6", "cn(7,4):1,7,5,6,2,3,6", "CN(3,4):1,1,1", "CN(7,4):-1,7,5,6,2,3,6",
                          ""}) {
    CHECK_THROWS_AS(parse_position(bad), ParseError);
  }
}

}
