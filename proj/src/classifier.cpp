// classifier.cpp

#include "cnim/classifier.hpp"

#include <algorithm>
#include <cassert>

namespace cnim {

namespace {

constexpr GameSpec kCN74{7, 4};

void require_cn74(const Position& p) {
  if (p.spec() != kCN74) {
    throw WrongGame("closed form for CN(7,4) applied to " + to_string(p.spec()));
  }
}

using Frame = std::array<Height, 7>;

Frame read_frame(const Position& p, const DihedralTransform& t) {
  Frame f{};
  for (std::size_t i = 0; i < 7; ++i) f[i] = p.heights()[source_index(t, i, 7)];
  return f;
}

bool a_is_min(const Frame& q) { return q[0] == *std::min_element(q.begin(), q.end()); }

bool s1_pattern(const Frame& q) {
  const auto [a, b, c, d, e, f, g] = q;
  return a == 0 && b == 0 && c == g && c > 0 && d + e + f == c;
}

bool s2_pattern(const Frame& q) {
  return std::all_of(q.begin(), q.end(), [&](Height h) { return h == q[0]; });
}

bool s3_pattern(const Frame& q) {
  const auto [a, b, c, d, e, f, g] = q;
  return a_is_min(q) && a == b && c == g && d == f && a + c == d + e && 0 < a && a < e;
}

bool s4_pattern(const Frame& q) {
  const auto [a, b, c, d, e, f, g] = q;
  return a_is_min(q) && a == f && b + c == d + e && d + e == g + a && a < std::min(b, e) &&
         a < std::max(c, d);
}

bool pattern(PSetLabel label, const Frame& q) {
  switch (label) {
    case PSetLabel::S1: return s1_pattern(q);
    case PSetLabel::S2: return s2_pattern(q);
    case PSetLabel::S3: return s3_pattern(q);
    case PSetLabel::S4: return s4_pattern(q);
    case PSetLabel::None: return false;
  }
  return false;
}

bool any_frame(const Position& p, PSetLabel label) {
  require_cn74(p);
  for (const auto& t : all_transforms(7)) {
    if (pattern(label, read_frame(p, t))) return true;
  }
  return false;
}

}  // namespace

std::string_view to_string(PSetLabel label) {
  switch (label) {
    case PSetLabel::S1: return "S1";
    case PSetLabel::S2: return "S2";
    case PSetLabel::S3: return "S3";
    case PSetLabel::S4: return "S4";
    case PSetLabel::None: return "None";
  }
  return "None";
}

ClassifierConfig ClassifierConfig::without(PSetLabel label) {
  ClassifierConfig c;
  if (label != PSetLabel::None) c.enabled[static_cast<std::size_t>(label)] = false;
  return c;
}

bool in_S1(const Position& p) { return any_frame(p, PSetLabel::S1); }
bool in_S2(const Position& p) { return any_frame(p, PSetLabel::S2); }
bool in_S3(const Position& p) { return any_frame(p, PSetLabel::S3); }
bool in_S4(const Position& p) { return any_frame(p, PSetLabel::S4); }

std::optional<CanonicalFrame> match_frame(const Position& p, PSetLabel label) {
  require_cn74(p);
  for (const auto& t : all_transforms(7)) {
    if (pattern(label, read_frame(p, t))) return CanonicalFrame{t, transform(p, t)};
  }
  return std::nullopt;
}

PSetLabel classify(const Position& p, const ClassifierConfig& config) {
  require_cn74(p);
  constexpr std::array labels{PSetLabel::S1, PSetLabel::S2, PSetLabel::S3, PSetLabel::S4};
  PSetLabel found = PSetLabel::None;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!config.enabled[i] || !any_frame(p, labels[i])) continue;
#ifdef NDEBUG
    return labels[i];
#else
    assert(found == PSetLabel::None && "S1..S4 must be disjoint");
    if (found == PSetLabel::None) found = labels[i];
#endif
  }
  return found;
}

bool family_is_P(const Position& p) {
  if (p.spec() == GameSpec{3, 2}) {
    return p[0] == p[1] && p[1] == p[2];
  }
  if (p.spec() == GameSpec{5, 3}) return in_general_S1(p, 2);
  throw WrongGame("no closed form for " + to_string(p.spec()) + " (expected CN(3,2) or CN(5,3))");
}

bool in_general_S1(const Position& p, int ell) {
  if (ell < 1 || p.spec() != GameSpec{2 * ell + 1, ell + 1}) {
    throw WrongGame("in_general_S1 with l=" + std::to_string(ell) + " applied to " + to_string(p.spec()));
  }
  const std::size_t n = p.size();
  const auto l = static_cast<std::size_t>(ell);
  for (const auto& t : all_transforms(n)) {
    auto at = [&](std::size_t i) { return p.heights()[source_index(t, i, n)]; };
    const Height x = at(0);
    if (at(l) != x) continue;
    bool zeros = true;
    for (std::size_t i = 1; i < l && zeros; ++i) zeros = at(i) == 0;
    if (!zeros) continue;
    Height tail = 0;
    for (std::size_t i = l + 1; i < n; ++i) tail += at(i);
    if (tail == x) return true;
  }
  return false;
}

}  // namespace cnim
