// verifier.hpp
//
// Exhaustive checks of a claimed P-set against the oracle.  A set A is the
// P-set iff (I) no move leads from A to A, (II) every position outside A has
// a move into A, and (III) the terminal position is in A.

#ifndef CNIM_VERIFIER_HPP
#define CNIM_VERIFIER_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "cnim/classifier.hpp"
#include "cnim/game.hpp"
#include "cnim/oracle.hpp"

namespace cnim {

struct Mismatch {
  std::vector<Height> heights;  // canonical
  Outcome oracle;
  std::string label;  // claimed label, "None" when outside the set
};

struct Violation {
  std::vector<Height> from;
  std::vector<Height> to;  // empty when there is no offending successor
  std::string detail;
};

struct VerificationReport {
  std::string check;  // "theorem" or "family"
  GameSpec spec;
  int height_bound = 0;
  std::size_t total_positions = 0;  // canonical
  std::size_t p_by_oracle = 0;
  std::size_t p_by_classifier = 0;
  std::vector<Mismatch> mismatches;
  std::vector<Violation> condition_i;
  std::vector<Violation> condition_ii;
  std::vector<Violation> condition_iii;
  std::vector<Violation> other;  // family-specific extra assertions
  double elapsed_seconds = 0;

  bool passed() const noexcept {
    return mismatches.empty() && condition_i.empty() && condition_ii.empty() && condition_iii.empty() &&
           other.empty();
  }
};

nlohmann::json to_json(const VerificationReport& r);
// Same content as to_json minus elapsed_seconds: a pure function of the inputs.
nlohmann::json to_json_deterministic(const VerificationReport& r);
std::string to_text(const VerificationReport& r);

/// CN(7,4), heights <= H: classifier vs oracle, then conditions I-III with
/// the strategist supplying the condition II moves.
VerificationReport verify_theorem(int H, const ClassifierConfig& config = {});

/// CN(2l+1, l+1), l in 1..4: in_general_S1 members are oracle-P and no move
/// joins two members; for l <= 2 the member set is the whole P-set; for l = 4
/// the all-2s position must be N.
VerificationReport verify_family(int ell, int H);
int default_family_height(int ell);

/// CSV "heights,label,outcome" of the canonical P-positions in key order.
/// The label is the closed-form label where one exists, else empty.
std::size_t enumerate_p(const OutcomeTable& table, std::ostream& out);
std::size_t enumerate_p(const GameSpec& spec, int H, const std::filesystem::path& out);

}  // namespace cnim

#endif  // CNIM_VERIFIER_HPP
