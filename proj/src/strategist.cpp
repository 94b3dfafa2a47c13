// strategist.cpp

#include "cnim/strategist.hpp"

#include <algorithm>
#include <numeric>

namespace cnim {

namespace {

constexpr GameSpec kCN74{7, 4};
constexpr std::size_t kN = 7;

using Frame7 = std::array<Height, kN>;
using Names = std::array<const char*, kN>;

Frame7 read(const Position& p, const DihedralTransform& t) {
  Frame7 q{};
  for (std::size_t i = 0; i < kN; ++i) q[i] = p.heights()[source_index(t, i, kN)];
  return q;
}

// Re-reads a frame array through t (same convention as transform()).
Frame7 reframe(const Frame7& q, const DihedralTransform& t) {
  Frame7 out{};
  for (std::size_t i = 0; i < kN; ++i) out[i] = q[source_index(t, i, kN)];
  return out;
}

Position unframe(const Position& p, const DihedralTransform& t, const Frame7& target) {
  std::vector<Height> out(kN);
  for (std::size_t i = 0; i < kN; ++i) out[source_index(t, i, kN)] = target[i];
  return Position(p.spec(), std::move(out));
}

LemmaFrame make_frame(const DihedralTransform& t, const Names& names) {
  LemmaFrame f{t, {}};
  for (std::size_t i = 0; i < kN; ++i) f.labels.emplace_back(names[i], source_index(t, i, kN));
  return f;
}

std::string describe(const Frame7& q) {
  std::string s = "(";
  for (std::size_t i = 0; i < kN; ++i) s += (i ? "," : "") + std::to_string(q[i]);
  return s + ")";
}

struct Candidate {
  Frame7 target;
  std::string rule;
};

/// Maps a frame-local construction back to p and checks it: the move must be
/// legal and land in S.
std::optional<LemmaPlay> finalize(const Position& p, const DihedralTransform& t, const Names& names,
                                  const Candidate& c, const StrategyOptions& opts) {
  std::optional<Move> move;
  if (std::all_of(c.target.begin(), c.target.end(), [](Height h) { return h >= 0; })) {
    Position result = unframe(p, t, c.target);
    move = move_between(p, result);
    if (move && classify(result) != PSetLabel::None) {
      return LemmaPlay{std::move(*move), std::move(result), c.rule, make_frame(t, names)};
    }
  }
  if (opts.cross_check) {
    throw StrategyDivergence("rule \"" + c.rule + "\" on " + format_position(p) + " framed as " +
                             describe(read(p, t)) + " produced " + describe(c.target) +
                             (move ? ", which is not in S" : ", which is not a legal move"));
  }
  return std::nullopt;
}

// ---- valleys ----------------------------------------------------------------

// v holds p1..p7.
std::optional<std::pair<Frame7, ValleyKind>> valley_at(const Frame7& v) {
  const Height inner = v[1] + v[2] + v[3];
  if (inner <= std::min(v[0], v[4])) {
    return std::pair{Frame7{inner, v[1], v[2], v[3], inner, 0, 0}, ValleyKind::Deep};
  }
  if (v[0] <= v[4] && v[1] + v[2] <= v[0] && v[0] < inner) {
    return std::pair{Frame7{v[0], v[1], v[2], v[0] - (v[1] + v[2]), v[0], 0, 0}, ValleyKind::Shallow};
  }
  return std::nullopt;
}

bool valley_available(const Frame7& v, const Frame7& target) { return target[0] > 0 && target != v; }

/// Applies the valley construction to the stacks q[order[0..6]] read as
/// p1..p7; returns q unchanged when there is no valley there, which the
/// caller's check then reports.
Frame7 valley_via(const Frame7& q, const std::array<std::size_t, kN>& order) {
  Frame7 v{};
  for (std::size_t i = 0; i < kN; ++i) v[i] = q[order[i]];
  auto found = valley_at(v);
  if (!found) return q;
  Frame7 out = q;
  for (std::size_t i = 0; i < kN; ++i) out[order[i]] = found->first[i];
  return out;
}

const char* valley_rule(const Frame7& q, const std::array<std::size_t, kN>& order) {
  Frame7 v{};
  for (std::size_t i = 0; i < kN; ++i) v[i] = q[order[i]];
  auto found = valley_at(v);
  return found && found->second == ValleyKind::Deep ? "deep valley" : "shallow valley";
}

// Lowers the listed stacks, in order, until `excess` tokens are gone.
void take(Frame7& q, Height excess, std::initializer_list<std::size_t> order) {
  for (std::size_t i : order) {
    const Height t = std::min(excess, q[i]);
    q[i] -= t;
    excess -= t;
  }
}

// ---- multiple zeros -----------------------------------------------------

bool has_adjacent_zeros(const Position& p) {
  for (std::ptrdiff_t i = 0; i < 7; ++i) {
    if (p[i] == 0 && p[i + 1] == 0) return true;
  }
  return false;
}

bool has_zeros_one_apart(const Position& p) {
  for (std::ptrdiff_t i = 0; i < 7; ++i) {
    if (p[i] == 0 && p[i + 2] == 0) return true;
  }
  return false;
}

constexpr Names kAdjacentNames{"x1", "0", "0", "x2", "y3", "y2", "y1"};
constexpr Names kOneApartNames{"0", "x", "0", "y1", "y2", "y3", "y4"};
constexpr Names kTwoApartNames{"0", "x1", "x2", "0", "y2", "y", "y1"};

Candidate zeros_adjacent(const Frame7& q) {
  // CN(3,2)-equivalent with A1 = {x1}, A2 = {x2}, A3 = {y3,y2,y1}.
  const Height s = std::min({q[0], q[3], q[4] + q[5] + q[6]});
  Frame7 t = q;
  t[0] = s;
  t[3] = s;
  take(t, q[4] + q[5] + q[6] - s, {6, 5, 4});
  return {t, "multiple zeros: adjacent zeros, CN(3,2) move"};
}

Candidate zeros_one_apart(const Frame7& q) {
  // A1 = {x}, A2 = {y1,y2}, A3 = {y3,y4}; y1 and y4 must stay positive, so
  // the inner stacks y2, y3 give up tokens first.
  const Height s = std::min({q[1], q[3] + q[4], q[5] + q[6]});
  Frame7 t = q;
  t[1] = s;
  take(t, q[3] + q[4] - s, {4, 3});
  take(t, q[5] + q[6] - s, {5, 6});
  return {t, "multiple zeros: zeros one apart, CN(3,2) move"};
}

Candidate zeros_two_apart(const Frame7& q) {
  const Height x1 = q[1], x2 = q[2], y2 = q[4], y = q[5], y1 = q[6];
  if (y1 >= x1) {
    const Height s = std::min(x1 + x2, y1);
    return {{0, x1, s - x1, 0, s, 0, s}, "multiple zeros: zeros two apart, y1 >= x1"};
  }
  // y1 < x1: create the zero pair x2' = 0 next to the original zero.
  const Height s = std::min({x1, y1 + y, y2});
  if (s == x1) return {{0, s, 0, 0, s, s - y1, y1}, "multiple zeros: zeros two apart, s = x1"};
  if (s == y1 + y) return {{0, s, 0, 0, s, y, y1}, "multiple zeros: zeros two apart, s = y1 + y"};
  if (s == y2 && y <= y2) return {{0, s, 0, 0, s, y, s - y}, "multiple zeros: zeros two apart, s = y2"};

  // Left: y > y2 >= y1 and y1 < x1; the maximum is x1, x2 or y.
  const Height m = std::max({x1, x2, y});
  if (m == x1) {
    const Height t = std::min({x1 + y1, x2 + y2, y});
    return {{0, t, t - y2, 0, y2, t, 0}, "multiple zeros: zeros two apart, maximum next to a zero"};
  }
  if (m == x2) {
    // Mirror image of the previous case (x1 <-> x2, y1 <-> y2).
    const Height t = std::min({x2 + y2, x1 + y1, y});
    return {{0, t - y1, t, 0, 0, t, y1}, "multiple zeros: zeros two apart, maximum next to a zero"};
  }
  if (x1 >= x2) {
    const Height t = std::min(x1, x2 + y2);
    return {{0, t, x2, 0, t - x2, t, 0}, "multiple zeros: zeros two apart, maximum at y"};
  }
  // x1 < x2: mirror image of the x1 >= x2 construction.
  const Height t = std::min(x2, x1 + y1);
  return {{0, x1, t, 0, 0, t, t - x1}, "multiple zeros: zeros two apart, maximum at y"};
}

// ---- unique zero ----------------------------------------------------------

constexpr Names kUniqueZeroNames{"0", "x1", "x2", "x3", "y3", "y2", "y1"};

// Frame indices: 0 | x1 x2 x3 | y3 y2 y1.
enum : std::size_t { Z = 0, X1 = 1, X2 = 2, X3 = 3, Y3 = 4, Y2 = 5, Y1 = 6 };

// Case (d) when x3 + y3 > min{x1, y1}; q is framed with x1 >= y1.
Candidate unique_zero_d_wide(const Frame7& q) {
  const Height x1 = q[X1], x3 = q[X3], y3 = q[Y3], y2 = q[Y2], y1 = q[Y1];
  const Height w = x3 + y3;
  // (0, y1, y2, y3', x3', 0, s) with y3' + x3' = s and x3' > 0.
  auto keep_y = [&](Height s) {
    Frame7 t = q;
    t[X1] = s;
    t[X2] = 0;
    t[X3] = std::min(x3, s);
    t[Y3] = s - t[X3];
    return t;
  };
  if (x1 >= w) {
    if (w > y1 + y2) return {keep_y(y1 + y2), "unique zero (d): s = y1 + y2"};
    Frame7 t = q;  // (0, s - y2, y2, y3, x3, 0, s), s = x3 + y3
    t[X1] = w;
    t[X2] = 0;
    t[Y1] = w - y2;
    return {t, "unique zero (d): s = x3 + y3"};
  }
  if (x1 >= y1 + y2) return {keep_y(y1 + y2), "unique zero (d): s = y1 + y2"};
  // (0, y1, y2', y3', x3', 0, x1) with y1 + y2' = x3' + y3' = x1.
  Frame7 t = q;
  t[X2] = 0;
  t[Y2] = x1 - y1;
  t[X3] = std::min(x3, x1);
  t[Y3] = x1 - t[X3];
  return {t, "unique zero (d): s = x1"};
}

Candidate unique_zero(const Frame7& q) {
  const Height x1 = q[X1], x2 = q[X2], x3 = q[X3], y3 = q[Y3], y2 = q[Y2], y1 = q[Y1];

  if (x1 + y1 <= y2) {  // (a)
    const Height s = x1 + y1;
    return {{0, x1, s, 0, 0, s, y1}, "unique zero (a)"};
  }
  if (y2 >= y1) {  // (b): y2 y1 0 x1 x2 is a shallow valley
    return {valley_via(q, {Y2, Y1, Z, X1, X2, X3, Y3}), "unique zero (b): shallow valley"};
  }
  if (x2 >= y1) {  // (c)
    const Height s = std::min(y1, y2 + y3 + x3);
    Frame7 t = q;
    t[X1] = 0;
    t[X2] = s;
    if (s == y1) {
      take(t, y3 + x3 - (s - y2), {X3, Y3});
    } else {
      t[Y1] = s;
    }
    return {t, "unique zero (c)"};
  }
  // (d): y2 <= x2 < y1.
  const Height w = x3 + y3;
  if (w <= std::min(x1, y1)) {
    if (y2 < w) {
      Frame7 t = q;  // (0, s - y2, y2, y3, x3, 0, s)
      t[X1] = w;
      t[X2] = 0;
      t[Y1] = w - y2;
      return {t, "unique zero (d): S4 target"};
    }
    // x2 x3 y3 y2 y1 is a deep or shallow valley.
    const std::array<std::size_t, kN> order{X2, X3, Y3, Y2, Y1, Z, X1};
    return {valley_via(q, order), std::string("unique zero (d): ") + valley_rule(q, order)};
  }
  if (x1 >= y1) return unique_zero_d_wide(q);
  if (w <= x2) {
    // Mirroring would give y2 >= x3 + y3 and no positive y1'; but x2 < y1
    // makes x2 x3 y3 y2 y1 a valley.
    const std::array<std::size_t, kN> order{X2, X3, Y3, Y2, Y1, Z, X1};
    return {valley_via(q, order), std::string("unique zero (d): ") + valley_rule(q, order)};
  }
  // Re-read with x and y exchanged (reflection fixing the zero).
  const DihedralTransform mirror{0, true};
  Candidate c = unique_zero_d_wide(reframe(q, mirror));
  c.target = reframe(c.target, mirror);
  return c;
}

// ---- no zero ----------------------------------------------------------------

constexpr Names kAntipodalNames{"x1", "x2", "M", "y3", "y2", "y1", "M"};
constexpr Names kNonAntipodalNames{"M", "x1", "x2", "x3", "y3", "y2", "y1"};

bool has_antipodal_maxima(const Position& p) {
  const Height m = p.max();
  for (std::ptrdiff_t i = 0; i < 7; ++i) {
    if (p[i] == m && p[i + 3] == m) return true;
  }
  return false;
}

// Case (a): (x1, x2, M, M, y, M, M) with x1 <= x2.
std::optional<Candidate> antipodal_four_maxima(const Frame7& q) {
  const Height x1 = q[0], x2 = q[1], m = q[2], y = q[4];
  if (x1 + x2 <= m) {
    // M x1 x2 M M is a shallow valley.
    return Candidate{valley_via(q, {6, 0, 1, 2, 3, 4, 5}), "maximum (a): shallow valley"};
  }
  if (x1 + x2 <= m + y) {
    const Height t = x1 + x2 - m;
    return Candidate{{x1, x2, x1, m, t, t, m}, "maximum (a): S3 target"};
  }
  // (x1', x2', y, M, y, M, y) with x1' + x2' = M + y and x1', x2' > y.
  const Height total = m + y;
  if (total < 2 * (y + 1)) return std::nullopt;
  Frame7 t{x1, x2, y, m, y, m, y};
  t[1] = std::max(y + 1, total - x1);
  t[0] = total - t[1];
  return Candidate{t, "maximum (a): S4 target"};
}

std::optional<Candidate> antipodal(const Frame7& q) {
  const Height x1 = q[0], x2 = q[1], m = q[2], y3 = q[3], y2 = q[4];
  if (y3 == m) {
    if (x1 <= x2) return antipodal_four_maxima(q);
    // The reflection swapping x1 and x2 fixes the four maxima.
    const DihedralTransform swap{1, true};
    auto c = antipodal_four_maxima(reframe(q, swap));
    if (c) c->target = reframe(c->target, swap);
    return c;
  }
  if (y2 + y3 <= m) {  // (b1): M y3 y2 y1 M
    const std::array<std::size_t, kN> order{2, 3, 4, 5, 6, 0, 1};
    return Candidate{valley_via(q, order), std::string("maximum (b1): ") + valley_rule(q, order)};
  }
  const Height s = std::min({y2 + y3, m + x1, m + x2});
  if (s == y2 + y3 || s == m + x2) {  // (b2)
    return Candidate{{s - m, s - m, m, y3, s - y3, y3, m}, "maximum (b2): S3 target"};
  }
  // (b3): s = M + x1
  return Candidate{{x1, x2, s - x2, y3, s - y3, x1, m}, "maximum (b3): S3/S4 target"};
}

Candidate non_antipodal(const Frame7& q) {
  const Height m = q[0], x1 = q[1], x2 = q[2], x3 = q[3], y3 = q[4], y2 = q[5];
  const Height s = std::min({m + x1, x2 + x3, y2 + y3});
  if (s == m + x1) {
    return {{m, x1, x2, m + x1 - x2, m + x1 - y2, y2, x1}, "maximum (non-antipodal): s = M + x1"};
  }
  const Height top = m >= s ? s : m;
  const Height low = m >= s ? 0 : s - m;
  if (s == x2 + x3) {
    if (y3 >= s) {  // y3 x3 x2 x1 M
      const std::array<std::size_t, kN> order{4, 3, 2, 1, 0, 6, 5};
      return {valley_via(q, order), std::string("maximum (non-antipodal): ") + valley_rule(q, order)};
    }
    Frame7 t = q;  // (M', m', y2', y3, x3, x2, m') read from M towards y
    t[0] = top;
    t[6] = low;
    t[5] = s - y3;
    t[1] = low;
    return {t, "maximum (non-antipodal): s = x2 + x3"};
  }
  // s = y2 + y3: roles of x and y exchanged.
  if (x3 >= s) {  // x3 y3 y2 y1 M
    const std::array<std::size_t, kN> order{3, 4, 5, 6, 0, 1, 2};
    return {valley_via(q, order), std::string("maximum (non-antipodal): ") + valley_rule(q, order)};
  }
  Frame7 t = q;
  t[0] = top;
  t[1] = low;
  t[2] = s - x3;
  t[6] = low;
  return {t, "maximum (non-antipodal): s = y2 + y3"};
}

void require_cn74(const Position& p) {
  if (p.spec() != kCN74) throw WrongGame("the CN(7,4) strategy applied to " + to_string(p.spec()));
}

template <typename PerFrame>
std::optional<LemmaPlay> search_frames(PerFrame&& per_frame) {
  for (const auto& t : all_transforms(kN)) {
    if (auto play = per_frame(t)) return play;
  }
  return std::nullopt;
}

std::vector<std::size_t> arc(std::size_t start, std::size_t len, std::size_t n) {
  std::vector<std::size_t> out(len);
  for (std::size_t i = 0; i < len; ++i) out[i] = (start + i) % n;
  return out;
}

Cn32Partition make_partition(const Position& p, std::array<std::vector<std::size_t>, 3> sets) {
  Cn32Partition part;
  part.sets = std::move(sets);
  const std::size_t n = p.size();
  std::vector<bool> used(n);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j : part.sets[i]) {
      used[j] = true;
      part.set_sums[i] += p.heights()[j];
    }
  }
  // Group the remaining stacks into circular runs.
  const auto first_used = static_cast<std::size_t>(std::find(used.begin(), used.end(), true) - used.begin());
  std::vector<std::size_t> run;
  for (std::size_t step = 1; step <= n; ++step) {
    const std::size_t i = (first_used + step) % n;
    if (!used[i]) {
      run.push_back(i);
    } else if (!run.empty()) {
      part.zero_runs.push_back(std::move(run));
      run.clear();
    }
  }
  return part;
}

}  // namespace

// ---- public: valleys ------------------------------------------------------

std::optional<Valley> detect_valley(const Position& p) {
  require_cn74(p);
  for (ValleyKind want : {ValleyKind::Deep, ValleyKind::Shallow}) {
    for (const auto& t : all_transforms(kN)) {
      const Frame7 v = read(p, t);
      auto found = valley_at(v);
      if (found && found->second == want && valley_available(v, found->first)) {
        return Valley{make_frame(t, {"p1", "p2", "p3", "p4", "p5", "p6", "p7"}), want};
      }
    }
  }
  return std::nullopt;
}

Move valley_move(const Position& p, const Valley& valley) {
  require_cn74(p);
  const Frame7 v = read(p, valley.frame.transform);
  auto found = valley_at(v);
  if (!found || found->second != valley.kind || !valley_available(v, found->first)) {
    throw IllegalMove(MoveFault::NoDecrease, "no valley in the given frame of " + format_position(p));
  }
  auto move = move_between(p, unframe(p, valley.frame.transform, found->first));
  if (!move) throw IllegalMove(MoveFault::BadWindow, "valley target not reachable from " + format_position(p));
  return *move;
}

// ---- public: CN(3,2) equivalence ------------------------------------------

bool is_valid_partition(const Position& p, const Cn32Partition& part) {
  const std::size_t n = p.size();
  const auto k = static_cast<std::size_t>(p.spec().k);
  std::vector<int> owner(n, -1);
  for (int s = 0; s < 3; ++s) {
    if (part.sets[s].empty()) return false;
    Height sum = 0;
    for (std::size_t j : part.sets[s]) {
      if (j >= n || owner[j] != -1) return false;
      owner[j] = s;
      sum += p.heights()[j];
    }
    if (sum != part.set_sums[s]) return false;
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (owner[j] == -1 && p.heights()[j] != 0) return false;
  }
  auto window_has = [&](std::size_t w, int s) {
    for (std::size_t i = 0; i < k; ++i) {
      if (owner[(w + i) % n] == s) return true;
    }
    return false;
  };
  auto window_covers = [&](std::size_t w, int s) {
    for (std::size_t j : part.sets[s]) {
      if ((j + n - w) % n >= k) return false;
    }
    return true;
  };
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      bool fits = false;
      for (std::size_t w = 0; w < n && !fits; ++w) fits = window_covers(w, a) && window_covers(w, b);
      if (!fits) return false;
    }
  }
  for (std::size_t w = 0; w < n; ++w) {
    if (window_has(w, 0) && window_has(w, 1) && window_has(w, 2)) return false;
  }
  return true;
}

std::optional<Cn32Partition> cn32_partition(const Position& p) {
  const std::size_t n = p.size();
  const auto k = static_cast<std::size_t>(p.spec().k);
  if (n == 2 * k - 1 && k >= 2) {
    const std::size_t ell = k - 1;
    for (std::size_t i = 0; i < n; ++i) {
      bool zeros = true;
      for (std::size_t j = 1; j < ell && zeros; ++j) zeros = p.heights()[(i + j) % n] == 0;
      if (!zeros) continue;
      auto part = make_partition(p, {arc(i, 1, n), arc(i + ell, 1, n), arc(i + ell + 1, ell, n)});
      if (is_valid_partition(p, part)) return part;
    }
  }
  // General search over three arcs with zero gaps; most zeros outside the sets wins.
  std::optional<Cn32Partition> best;
  std::size_t best_gap = 0;
  for (std::size_t start = 0; start < n; ++start) {
    for (std::size_t l1 = 1; l1 + 2 <= n; ++l1) {
      for (std::size_t g1 = 0; l1 + g1 + 2 <= n; ++g1) {
        for (std::size_t l2 = 1; l1 + g1 + l2 + 1 <= n; ++l2) {
          for (std::size_t g2 = 0; l1 + g1 + l2 + g2 + 1 <= n; ++g2) {
            for (std::size_t l3 = 1; l1 + g1 + l2 + g2 + l3 <= n; ++l3) {
              const std::size_t gap = n - (l1 + l2 + l3);
              if (best && gap <= best_gap) continue;
              auto part = make_partition(
                  p, {arc(start, l1, n), arc(start + l1 + g1, l2, n), arc(start + l1 + g1 + l2 + g2, l3, n)});
              if (!is_valid_partition(p, part)) continue;
              best = std::move(part);
              best_gap = gap;
            }
          }
        }
      }
    }
  }
  return best;
}

std::optional<Move> cn32_winning_move(const Position& p, const Cn32Partition& part) {
  const Height target = *std::min_element(part.set_sums.begin(), part.set_sums.end());
  std::vector<Height> h = p.heights();
  for (std::size_t s = 0; s < 3; ++s) {
    Height excess = part.set_sums[s] - target;
    for (auto it = part.sets[s].rbegin(); it != part.sets[s].rend() && excess > 0; ++it) {
      const Height t = std::min(excess, h[*it]);
      h[*it] -= t;
      excess -= t;
    }
  }
  return move_between(p, Position(p.spec(), std::move(h)));
}

// ---- public: lemmas ---------------------------------------------------------

std::optional<LemmaPlay> multiple_zeros_move(const Position& p, const DihedralTransform& t,
                                             const StrategyOptions& opts) {
  require_cn74(p);
  if (p.zero_count() < 2) return std::nullopt;
  const Frame7 q = read(p, t);
  if (has_adjacent_zeros(p)) {
    if (q[1] != 0 || q[2] != 0) return std::nullopt;
    return finalize(p, t, kAdjacentNames, zeros_adjacent(q), opts);
  }
  if (has_zeros_one_apart(p)) {
    if (q[0] != 0 || q[2] != 0) return std::nullopt;
    return finalize(p, t, kOneApartNames, zeros_one_apart(q), opts);
  }
  if (q[0] != 0 || q[3] != 0 || q[4] < q[6]) return std::nullopt;
  return finalize(p, t, kTwoApartNames, zeros_two_apart(q), opts);
}

std::optional<LemmaPlay> multiple_zeros_move(const Position& p, const StrategyOptions& opts) {
  return search_frames([&](const DihedralTransform& t) { return multiple_zeros_move(p, t, opts); });
}

std::optional<LemmaPlay> unique_zero_move(const Position& p, const DihedralTransform& t,
                                          const StrategyOptions& opts) {
  require_cn74(p);
  if (p.zero_count() != 1) return std::nullopt;
  const Frame7 q = read(p, t);
  if (q[Z] != 0 || q[X2] < q[Y2]) return std::nullopt;
  return finalize(p, t, kUniqueZeroNames, unique_zero(q), opts);
}

std::optional<LemmaPlay> unique_zero_move(const Position& p, const StrategyOptions& opts) {
  return search_frames([&](const DihedralTransform& t) { return unique_zero_move(p, t, opts); });
}

std::optional<LemmaPlay> maximum_move(const Position& p, const DihedralTransform& t, const StrategyOptions& opts) {
  require_cn74(p);
  if (p.zero_count() != 0) return std::nullopt;
  const Frame7 q = read(p, t);
  const Height m = p.max();
  if (has_antipodal_maxima(p)) {
    if (q[2] != m || q[6] != m || q[3] > q[5]) return std::nullopt;
    auto c = antipodal(q);
    if (!c) return std::nullopt;
    return finalize(p, t, kAntipodalNames, *c, opts);
  }
  if (q[0] != m || q[3] >= m || q[4] >= m || q[1] > q[6]) return std::nullopt;
  return finalize(p, t, kNonAntipodalNames, non_antipodal(q), opts);
}

std::optional<LemmaPlay> maximum_move(const Position& p, const StrategyOptions& opts) {
  return search_frames([&](const DihedralTransform& t) { return maximum_move(p, t, opts); });
}

LemmaPlay explain_winning_move(const Position& p, const StrategyOptions& opts) {
  require_cn74(p);
  if (const PSetLabel label = classify(p); label != PSetLabel::None) {
    throw NoWinningMove(format_position(p) + " is a P-position (" + std::string(to_string(label)) + ")");
  }
  std::optional<LemmaPlay> play;
  switch (p.zero_count()) {
    case 0: play = maximum_move(p, opts); break;
    case 1: play = unique_zero_move(p, opts); break;
    default: play = multiple_zeros_move(p, opts); break;
  }
  if (opts.cross_check) {
    const bool referee = brute_force_winning_move(p).has_value();
    if (play.has_value() != referee) {
      throw StrategyDivergence("constructive strategy and brute force disagree on " + format_position(p));
    }
  }
  if (!play) throw StrategyDivergence("no construction applies to " + format_position(p));
  return std::move(*play);
}

Move find_winning_move(const Position& p, const StrategyOptions& opts) {
  return explain_winning_move(p, opts).move;
}

std::optional<Move> brute_force_winning_move(const Position& p) {
  require_cn74(p);
  std::optional<Move> found;
  for_each_legal_move(p, [&](const Move& m) {
    if (classify(apply_move(p, m)) == PSetLabel::None) return true;
    found = m;
    return false;
  });
  return found;
}

}  // namespace cnim
