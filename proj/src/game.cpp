// game.cpp

#include "cnim/game.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <sstream>

namespace cnim {

std::string_view to_string(MoveFault fault) {
  switch (fault) {
    case MoveFault::BadWindow: return "bad window";
    case MoveFault::WrongLength: return "replacement length differs from k";
    case MoveFault::Increase: return "floor violation";
    case MoveFault::NoDecrease: return "no token removed";
  }
  return "unknown";
}

GameSpec GameSpec::make(int n, int k) {
  if (n < 1 || k < 1 || k > n) {
    throw InvalidPosition("invalid game CN(" + std::to_string(n) + "," + std::to_string(k) +
                          "): need 1 <= k <= n");
  }
  return GameSpec{n, k};
}

std::string to_string(const GameSpec& spec) {
  return "CN(" + std::to_string(spec.n) + "," + std::to_string(spec.k) + ")";
}

Position::Position(GameSpec spec, std::vector<Height> heights)
    : spec_(spec), heights_(std::move(heights)) {
  GameSpec::make(spec_.n, spec_.k);
  if (heights_.size() != static_cast<std::size_t>(spec_.n)) {
    throw InvalidPosition("expected " + std::to_string(spec_.n) + " heights, got " +
                          std::to_string(heights_.size()));
  }
  for (Height h : heights_) {
    if (h < 0) throw InvalidPosition("negative stack height " + std::to_string(h));
  }
}

Height Position::operator[](std::ptrdiff_t i) const noexcept {
  const auto n = static_cast<std::ptrdiff_t>(heights_.size());
  return heights_[static_cast<std::size_t>(((i % n) + n) % n)];
}

Height Position::token_sum() const noexcept {
  return std::accumulate(heights_.begin(), heights_.end(), Height{0});
}

Height Position::min() const noexcept { return *std::min_element(heights_.begin(), heights_.end()); }

Height Position::max() const noexcept { return *std::max_element(heights_.begin(), heights_.end()); }

std::size_t Position::zero_count() const noexcept {
  return static_cast<std::size_t>(std::count(heights_.begin(), heights_.end(), Height{0}));
}

Position make_position(const GameSpec& spec, std::span<const Height> heights) {
  return Position(spec, std::vector<Height>(heights.begin(), heights.end()));
}

Position make_position(const GameSpec& spec, std::initializer_list<Height> heights) {
  return Position(spec, std::vector<Height>(heights));
}

bool is_terminal(const Position& p) noexcept {
  return std::all_of(p.heights().begin(), p.heights().end(), [](Height h) { return h == 0; });
}

std::size_t source_index(const DihedralTransform& t, std::size_t i, std::size_t n) noexcept {
  const auto sn = static_cast<std::ptrdiff_t>(n);
  const auto si = static_cast<std::ptrdiff_t>(i);
  const std::ptrdiff_t src = t.reflected ? t.rotation - si : si - t.rotation;
  return static_cast<std::size_t>(((src % sn) + sn) % sn);
}

DihedralTransform inverse(const DihedralTransform& t, std::size_t n) noexcept {
  // i -> r - i is an involution.
  if (t.reflected) return t;
  const int sn = static_cast<int>(n);
  return DihedralTransform{(sn - t.rotation % sn) % sn, false};
}

std::vector<DihedralTransform> all_transforms(std::size_t n) {
  std::vector<DihedralTransform> out;
  out.reserve(2 * n);
  for (bool reflected : {false, true}) {
    for (std::size_t r = 0; r < n; ++r) out.push_back({static_cast<int>(r), reflected});
  }
  return out;
}

Position transform(const Position& p, const DihedralTransform& t) {
  const std::size_t n = p.size();
  std::vector<Height> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = p.heights()[source_index(t, i, n)];
  return Position(p.spec(), std::move(out));
}

std::vector<Height> canonical_heights(std::span<const Height> heights) {
  const std::size_t n = heights.size();
  std::vector<Height> best(heights.begin(), heights.end());
  std::vector<Height> cand(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (int dir : {1, -1}) {
      for (std::size_t i = 0; i < n; ++i) {
        const auto j = static_cast<std::ptrdiff_t>(r) + dir * static_cast<std::ptrdiff_t>(i);
        const auto sn = static_cast<std::ptrdiff_t>(n);
        cand[i] = heights[static_cast<std::size_t>(((j % sn) + sn) % sn)];
      }
      if (cand < best) best = cand;
    }
  }
  return best;
}

Position canonicalize(const Position& p) {
  return Position(p.spec(), canonical_heights(p.heights()));
}

std::string to_string(const Move& m) {
  std::ostringstream os;
  os << "window " << m.window_start << " -> [";
  for (std::size_t i = 0; i < m.new_heights.size(); ++i) {
    if (i) os << ',';
    os << m.new_heights[i];
  }
  os << ']';
  return os.str();
}

std::optional<MoveFault> check_move(const Position& p, const Move& m) {
  const auto n = p.size();
  const auto k = static_cast<std::size_t>(p.spec().k);
  if (m.window_start >= n) return MoveFault::BadWindow;
  if (m.new_heights.size() != k) return MoveFault::WrongLength;
  // k == n windows cover every stack once; smaller windows never wrap onto themselves.
  bool decreased = false;
  for (std::size_t i = 0; i < k; ++i) {
    const Height cur = p.heights()[(m.window_start + i) % n];
    const Height next = m.new_heights[i];
    if (next < 0 || next > cur) return MoveFault::Increase;
    if (next < cur) decreased = true;
  }
  if (!decreased) return MoveFault::NoDecrease;
  return std::nullopt;
}

Position apply_move(const Position& p, const Move& m) {
  if (auto fault = check_move(p, m)) {
    throw IllegalMove(*fault, "illegal move " + to_string(m) + " on " + format_position(p) + ": " +
                                  std::string(to_string(*fault)));
  }
  std::vector<Height> out = p.heights();
  for (std::size_t i = 0; i < m.new_heights.size(); ++i) {
    out[(m.window_start + i) % out.size()] = m.new_heights[i];
  }
  return Position(p.spec(), std::move(out));
}

void for_each_legal_move(const Position& p, const std::function<bool(const Move&)>& visit) {
  const std::size_t n = p.size();
  const auto k = static_cast<std::size_t>(p.spec().k);
  // With k == n every window start selects the same stacks; still report each
  // start, as the caller de-duplicates.
  Move m;
  m.new_heights.resize(k);
  for (std::size_t w = 0; w < n; ++w) {
    m.window_start = w;
    std::vector<Height> top(k);
    for (std::size_t i = 0; i < k; ++i) top[i] = p.heights()[(w + i) % n];
    // Odometer over all replacement vectors below top, skipping top itself.
    std::fill(m.new_heights.begin(), m.new_heights.end(), Height{0});
    while (true) {
      if (m.new_heights != top && !visit(m)) return;
      std::size_t i = 0;
      while (i < k && m.new_heights[i] == top[i]) m.new_heights[i++] = 0;
      if (i == k) break;
      ++m.new_heights[i];
    }
  }
}

std::vector<Move> legal_moves(const Position& p) {
  std::vector<Move> out;
  for_each_legal_move(p, [&](const Move& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

std::optional<Move> move_between(const Position& p, const Position& target) {
  if (p.spec() != target.spec()) return std::nullopt;
  const std::size_t n = p.size();
  const auto k = static_cast<std::size_t>(p.spec().k);
  std::vector<bool> changed(n);
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (target.heights()[i] > p.heights()[i]) return std::nullopt;
    changed[i] = target.heights()[i] != p.heights()[i];
    any = any || changed[i];
  }
  if (!any) return std::nullopt;
  for (std::size_t w = 0; w < n; ++w) {
    bool covers = true;
    for (std::size_t i = 0; i < n && covers; ++i) {
      const std::size_t offset = (i + n - w) % n;
      if (changed[i] && offset >= k) covers = false;
    }
    if (!covers) continue;
    Move m{w, std::vector<Height>(k)};
    for (std::size_t i = 0; i < k; ++i) m.new_heights[i] = target.heights()[(w + i) % n];
    return m;
  }
  return std::nullopt;
}

std::string format_position(const Position& p) {
  std::string out = to_string(p.spec()) + ":";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(p.heights()[i]);
  }
  return out;
}

namespace {

// Parses a non-negative decimal integer occupying all of text.
template <typename T>
T parse_number(std::string_view text, std::string_view whole) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (text.empty() || text.front() == '+' || text.front() == '-') {
    throw ParseError("malformed number in \"" + std::string(whole) + "\"");
  }
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError("malformed number in \"" + std::string(whole) + "\"");
  }
  return value;
}

}  // namespace

Position parse_position(std::string_view text) {
  const std::string_view whole = text;
  if (!text.starts_with("CN(")) throw ParseError("expected \"CN(n,k):...\" in \"" + std::string(whole) + "\"");
  text.remove_prefix(3);
  const auto comma = text.find(',');
  const auto close = text.find("):");
  if (comma == std::string_view::npos || close == std::string_view::npos || comma > close) {
    throw ParseError("expected \"CN(n,k):...\" in \"" + std::string(whole) + "\"");
  }
  const int n = parse_number<int>(text.substr(0, comma), whole);
  const int k = parse_number<int>(text.substr(comma + 1, close - comma - 1), whole);
  text.remove_prefix(close + 2);

  std::vector<Height> heights;
  while (true) {
    const auto next = text.find(',');
    heights.push_back(parse_number<Height>(text.substr(0, next), whole));
    if (next == std::string_view::npos) break;
    text.remove_prefix(next + 1);
  }
  try {
    return Position(GameSpec::make(n, k), std::move(heights));
  } catch (const InvalidPosition& e) {
    throw ParseError(std::string(e.what()) + " in \"" + std::string(whole) + "\"");
  }
}

}  // namespace cnim
