// classifier.hpp
//
// Closed-form P-position tests.  For CN(7,4) a position read as
// (a,b,c,d,e,f,g) with a a minimum is a P-position iff it lies in one of
//
//   S1: a = b = 0, c = g > 0, d + e + f = c
//   S2: a = b = c = d = e = f = g
//   S3: a = b, c = g, d = f, a + c = d + e, 0 < a < e
//   S4: a = f, b + c = d + e = g + a, a < min{b, e}, a < max{c, d}
//
// Every test quantifies over the whole dihedral orbit; callers never need
// to pre-canonicalize.

#ifndef CNIM_CLASSIFIER_HPP
#define CNIM_CLASSIFIER_HPP

#include <array>
#include <optional>
#include <string_view>

#include "cnim/game.hpp"

namespace cnim {

enum class PSetLabel { S1, S2, S3, S4, None };

std::string_view to_string(PSetLabel label);

/// A position re-read so that its stacks are (a,b,c,d,e,f,g).
struct CanonicalFrame {
  DihedralTransform transform;
  Position labeled;
};

/// Lets tests switch individual sets off (mutation controls).
struct ClassifierConfig {
  std::array<bool, 4> enabled{true, true, true, true};

  static ClassifierConfig without(PSetLabel label);
};

bool in_S1(const Position& p);
bool in_S2(const Position& p);
bool in_S3(const Position& p);
bool in_S4(const Position& p);

// First frame (in all_transforms order) matching the label's pattern.
std::optional<CanonicalFrame> match_frame(const Position& p, PSetLabel label);

PSetLabel classify(const Position& p, const ClassifierConfig& config = {});
inline bool is_P(const Position& p, const ClassifierConfig& config = {}) {
  return classify(p, config) != PSetLabel::None;
}

/// Exact P-membership for CN(3,2) (equal heights) and CN(5,3)
/// ((x,0,x,a,b) with x = a + b, up to symmetry).
bool family_is_P(const Position& p);

/// The S1 family of CN(2l+1, l+1): (x, 0^(l-1), x, a_1..a_l) with sum a_i = x,
/// up to symmetry.  x = 0 is allowed, so the zero position is a member.
bool in_general_S1(const Position& p, int ell);

}  // namespace cnim

#endif  // CNIM_CLASSIFIER_HPP
