// oracle.hpp
//
// Ground-truth P/N classification by exhaustive game-tree evaluation.
// A position is N iff some option is P; terminal positions are P.

#ifndef CNIM_ORACLE_HPP
#define CNIM_ORACLE_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cnim/game.hpp"

namespace cnim {

enum class Outcome : std::uint8_t { N = 0, P = 1 };

std::string_view to_string(Outcome o);

class TableFormatError : public Error {
public:
  using Error::Error;
};

/// Outcomes keyed by canonical position.  The key is the canonical height
/// sequence, one byte per stack, so heights are limited to 255.
class OutcomeTable {
public:
  static constexpr Height kMaxKeyHeight = 255;

  explicit OutcomeTable(GameSpec spec, int height_bound = -1)
      : spec_(spec), height_bound_(height_bound) {}

  const GameSpec& spec() const noexcept { return spec_; }
  // Every canonical position with all heights <= height_bound() is present.
  // -1 when the table makes no such promise.
  int height_bound() const noexcept { return height_bound_; }
  void set_height_bound(int h) noexcept { height_bound_ = h; }

  std::optional<Outcome> find(const Position& p) const;
  std::optional<Outcome> find_key(const std::string& key) const;
  void insert(const Position& p, Outcome o);
  void insert_key(std::string key, Outcome o);

  std::size_t size() const noexcept { return entries_.size(); }
  const std::map<std::string, Outcome>& entries() const noexcept { return entries_; }

  static std::string key_of(std::span<const Height> canonical);
  static std::vector<Height> heights_of(std::string_view key);

  bool operator==(const OutcomeTable&) const = default;

private:
  GameSpec spec_;
  int height_bound_;
  std::map<std::string, Outcome> entries_;
};

/// Exact outcome under normal play.  Answers from cache when possible,
/// otherwise evaluates top-down over the positions below p and records
/// every resolved position in cache.
Outcome outcome(const Position& p, OutcomeTable& cache);

/// Retrograde solve of every position with all heights <= H, one token-sum
/// layer at a time.  Layers run in parallel on `threads` workers (0 picks
/// the hardware concurrency).
OutcomeTable solve_all(const GameSpec& spec, int H, unsigned threads = 0);

/// All legal moves landing on a P-position; empty iff p is P.
std::vector<Move> winning_options(const Position& p, OutcomeTable& cache);

/// Binary format, little endian:
///   "CNIMTBL\0" | u32 version | u32 n | u32 k | i32 H | u64 count |
///   count * (n key bytes | u8 outcome: 1 = P, 0 = N), keys ascending.
void save_table(const OutcomeTable& t, const std::filesystem::path& path);
OutcomeTable load_table(const std::filesystem::path& path);
// As above, but rejects a file whose header names a different game.
OutcomeTable load_table(const std::filesystem::path& path, const GameSpec& expected);

/// CSV with header "heights,outcome"; heights are a quoted comma list.
void export_csv(const OutcomeTable& t, std::ostream& os);

}  // namespace cnim

#endif  // CNIM_ORACLE_HPP
