// game.hpp
//
// Circular Nim CN(n,k): n stacks on a circle, a move picks k consecutive
// stacks and removes at least one token from at least one of them.

#ifndef CNIM_GAME_HPP
#define CNIM_GAME_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cnim {

using Height = std::int64_t;

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class InvalidPosition : public Error {
public:
  using Error::Error;
};

class ParseError : public Error {
public:
  using Error::Error;
};

class WrongGame : public Error {
public:
  using Error::Error;
};

enum class MoveFault { BadWindow, WrongLength, Increase, NoDecrease };

std::string_view to_string(MoveFault fault);

class IllegalMove : public Error {
public:
  IllegalMove(MoveFault fault, const std::string& what)
      : Error(what), fault_(fault) {}

  MoveFault fault() const noexcept { return fault_; }

private:
  MoveFault fault_;
};

struct GameSpec {
  int n = 1;
  int k = 1;

  // Throws InvalidPosition unless 1 <= k <= n.
  static GameSpec make(int n, int k);

  bool operator==(const GameSpec&) const = default;
};

std::string to_string(const GameSpec& spec);

class Position {
public:
  Position(GameSpec spec, std::vector<Height> heights);

  const GameSpec& spec() const noexcept { return spec_; }
  const std::vector<Height>& heights() const noexcept { return heights_; }
  std::size_t size() const noexcept { return heights_.size(); }

  // Circular access: any index is reduced mod n.
  Height operator[](std::ptrdiff_t i) const noexcept;

  Height token_sum() const noexcept;
  Height min() const noexcept;
  Height max() const noexcept;
  std::size_t zero_count() const noexcept;

  bool operator==(const Position&) const = default;

private:
  GameSpec spec_;
  std::vector<Height> heights_;
};

Position make_position(const GameSpec& spec, std::span<const Height> heights);
Position make_position(const GameSpec& spec, std::initializer_list<Height> heights);

bool is_terminal(const Position& p) noexcept;

/// A rigid motion of the circle.  Reflection (about index 0) is applied
/// first, then rotation: rotating by r moves the content of index i to
/// index i + r.
struct DihedralTransform {
  int rotation = 0;
  bool reflected = false;

  bool operator==(const DihedralTransform&) const = default;
};

// Index of the source stack that lands at index i.
std::size_t source_index(const DihedralTransform& t, std::size_t i, std::size_t n) noexcept;
DihedralTransform inverse(const DihedralTransform& t, std::size_t n) noexcept;
// All 2n transforms: rotations 0..n-1 unreflected, then reflected.
std::vector<DihedralTransform> all_transforms(std::size_t n);

Position transform(const Position& p, const DihedralTransform& t);

/// Lexicographically smallest height sequence over the dihedral orbit.
Position canonicalize(const Position& p);
// Same as canonicalize(p).heights(), without the Position wrapper.
std::vector<Height> canonical_heights(std::span<const Height> heights);

struct Move {
  std::size_t window_start = 0;
  std::vector<Height> new_heights;

  bool operator==(const Move&) const = default;
};

std::string to_string(const Move& m);

// Returns the reason m is illegal on p, or nothing if it is legal.
std::optional<MoveFault> check_move(const Position& p, const Move& m);
Position apply_move(const Position& p, const Move& m);

/// Calls visit(move) for every legal move.  Distinct windows that produce
/// the same successor are all visited.  Stops early if visit returns false.
void for_each_legal_move(const Position& p, const std::function<bool(const Move&)>& visit);
std::vector<Move> legal_moves(const Position& p);

/// Finds a move turning p into target: every stack that changes must fit in
/// one k-window and none may grow.  Picks the smallest window start.
std::optional<Move> move_between(const Position& p, const Position& target);

std::string format_position(const Position& p);
Position parse_position(std::string_view text);

}  // namespace cnim

#endif  // CNIM_GAME_HPP
