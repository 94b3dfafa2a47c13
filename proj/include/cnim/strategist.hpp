// strategist.hpp
//
// Constructive winning moves for CN(7,4).  From any position outside S the
// strategist builds a move into S case by case:
//
//   >= 2 zero stacks   multiple_zeros_move
//   exactly one zero   unique_zero_move
//   no zero            maximum_move
//
// Each construction works in a "frame": a dihedral re-reading of the
// position in which the case's generic names (x1, y2, M, ...) sit at fixed
// indices.  Frames are found by trying every dihedral transform; the move is
// computed in-frame and mapped back to the caller's indexing.
//
// Valleys and CN(3,2)-equivalent partitions are general tools used by
// several cases; the partition helpers work for any CN(n,k).

#ifndef CNIM_STRATEGIST_HPP
#define CNIM_STRATEGIST_HPP

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cnim/classifier.hpp"
#include "cnim/game.hpp"

namespace cnim {

class NoWinningMove : public Error {
public:
  using Error::Error;
};

// A case guard held but its construction produced an illegal move or a
// result outside S.  Raised only when StrategyOptions::cross_check is set.
class StrategyDivergence : public Error {
public:
  using Error::Error;
};

struct LemmaFrame {
  DihedralTransform transform;
  // Generic stack name -> index in the original position.
  std::vector<std::pair<std::string, std::size_t>> labels;
};

struct LemmaPlay {
  Move move;
  Position result;
  std::string rule;
  LemmaFrame frame;
};

struct StrategyOptions {
  // Raise StrategyDivergence on a failed construction instead of moving on
  // to the next frame, and compare against brute_force_winning_move.
  bool cross_check = false;
};

// ---- valleys ------------------------------------------------------------

enum class ValleyKind { Deep, Shallow };

struct Valley {
  LemmaFrame frame;  // p1..p7
  ValleyKind kind;
};

/// Five consecutive stacks p1..p5 with p2+p3+p4 <= min{p1,p5} (deep), or
/// p1 <= p5 and p2+p3 <= p1 < p2+p3+p4 (shallow).  Only valleys whose move
/// is available are reported: the S1 target must be nonzero and differ from
/// p.  Deep valleys are preferred.
std::optional<Valley> detect_valley(const Position& p);
/// Deep: (s,p2,p3,p4,s,0,0) with s = p2+p3+p4.
/// Shallow: (p1,p2,p3,p1-(p2+p3),p1,0,0).
Move valley_move(const Position& p, const Valley& valley);

// ---- CN(3,2) equivalence -------------------------------------------------

struct Cn32Partition {
  std::array<std::vector<std::size_t>, 3> sets;  // each in circular order
  std::vector<std::vector<std::size_t>> zero_runs;
  std::array<Height, 3> set_sums{};
};

/// Three disjoint arcs separated by runs of zero stacks such that any two
/// arcs (with the zeros between them) fit in one k-window but no k-window
/// touches all three.  For CN(2l+1,l+1) with l-1 consecutive zeros the
/// singleton / singleton / l-block split is returned.
std::optional<Cn32Partition> cn32_partition(const Position& p);
bool is_valid_partition(const Position& p, const Cn32Partition& part);
/// Lowers every set sum to the smallest one, taking tokens from the last
/// stack of a set first.  Empty when the sums are already equal.
std::optional<Move> cn32_winning_move(const Position& p, const Cn32Partition& part);

// ---- the CN(7,4) lemmas --------------------------------------------------

/// Frame (x1,0,0,x2,y3,y2,y1), (0,x,0,y1,y2,y3,y4) or (0,x1,x2,0,y2,y,y1),
/// by zero spacing.  Requires >= 2 zeros.
std::optional<LemmaPlay> multiple_zeros_move(const Position& p, const StrategyOptions& opts = {});
std::optional<LemmaPlay> multiple_zeros_move(const Position& p, const DihedralTransform& frame,
                                             const StrategyOptions& opts = {});

/// Frame (0,x1,x2,x3,y3,y2,y1) with x2 >= y2.  Requires exactly one zero.
std::optional<LemmaPlay> unique_zero_move(const Position& p, const StrategyOptions& opts = {});
std::optional<LemmaPlay> unique_zero_move(const Position& p, const DihedralTransform& frame,
                                          const StrategyOptions& opts = {});

/// Antipodal frame (x1,x2,M,y3,y2,y1,M) with y3 <= y1, or non-antipodal
/// frame (M,x1,x2,x3,y3,y2,y1) with M > max{x3,y3} and x1 <= y1.
/// Requires no zero stack.
std::optional<LemmaPlay> maximum_move(const Position& p, const StrategyOptions& opts = {});
std::optional<LemmaPlay> maximum_move(const Position& p, const DihedralTransform& frame,
                                      const StrategyOptions& opts = {});

/// Dispatches on the zero count.  Throws NoWinningMove for P-positions and
/// WrongGame outside CN(7,4).
LemmaPlay explain_winning_move(const Position& p, const StrategyOptions& opts = {});
Move find_winning_move(const Position& p, const StrategyOptions& opts = {});

/// Referee: first legal move (in legal_moves order) whose result is in S.
std::optional<Move> brute_force_winning_move(const Position& p);

}  // namespace cnim

#endif  // CNIM_STRATEGIST_HPP
