// oracle.cpp

#include "cnim/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstring>
#include <fstream>
#include <limits>
#include <ostream>
#include <thread>

namespace cnim {

namespace {

enum : std::uint8_t { kUnknown = 0, kP = 1, kN = 2 };

/// Dense mixed-radix index over every position componentwise below `bounds`.
/// Any option of a position in the box is in the box and has a smaller
/// index, since moves never increase a stack.
class Box {
public:
  Box(const GameSpec& spec, std::vector<Height> bounds)
      : spec_(spec), bounds_(std::move(bounds)), strides_(bounds_.size()) {
    std::size_t size = 1;
    for (std::size_t i = 0; i < bounds_.size(); ++i) {
      strides_[i] = size;
      const auto radix = static_cast<std::size_t>(bounds_[i]) + 1;
      if (size > std::numeric_limits<std::size_t>::max() / radix) {
        throw std::length_error("position space too large for the oracle");
      }
      size *= radix;
    }
    size_ = size;
    const auto n = static_cast<std::size_t>(spec.n);
    const auto k = static_cast<std::size_t>(spec.k);
    // With k == n every window covers the same stacks.
    const std::size_t windows = k == n ? 1 : n;
    for (std::size_t w = 0; w < windows; ++w) {
      std::vector<std::size_t> stacks(k);
      for (std::size_t i = 0; i < k; ++i) stacks[i] = (w + i) % n;
      windows_.push_back(std::move(stacks));
    }
  }

  std::size_t size() const noexcept { return size_; }
  std::size_t n() const noexcept { return bounds_.size(); }

  std::size_t index(std::span<const Height> h) const noexcept {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < h.size(); ++i) idx += static_cast<std::size_t>(h[i]) * strides_[i];
    return idx;
  }

  void heights(std::size_t idx, std::vector<Height>& out) const {
    out.resize(bounds_.size());
    for (std::size_t i = 0; i < bounds_.size(); ++i) {
      const auto radix = static_cast<std::size_t>(bounds_[i]) + 1;
      out[i] = static_cast<Height>(idx % radix);
      idx /= radix;
    }
  }

  /// Calls visit(child_index) for every option of the position at idx
  /// (heights h).  Stops and returns true as soon as visit returns true.
  template <typename Visit>
  bool any_child(std::size_t idx, std::span<const Height> h, Visit&& visit) const {
    const std::size_t k = windows_.front().size();
    std::vector<Height> dec(k);
    for (const auto& stacks : windows_) {
      std::fill(dec.begin(), dec.end(), Height{0});
      std::size_t delta = 0;
      while (true) {
        std::size_t i = 0;
        while (i < k && dec[i] == h[stacks[i]]) {
          delta -= static_cast<std::size_t>(dec[i]) * strides_[stacks[i]];
          dec[i++] = 0;
        }
        if (i == k) break;
        ++dec[i];
        delta += strides_[stacks[i]];
        if (visit(idx - delta)) return true;
      }
    }
    return false;
  }

private:
  GameSpec spec_;
  std::vector<Height> bounds_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
  std::vector<std::vector<std::size_t>> windows_;
};

/// Top-down evaluator over a box with a dense memo.
class TopDown {
public:
  TopDown(const GameSpec& spec, std::vector<Height> bounds)
      : box_(spec, std::move(bounds)), memo_(box_.size(), kUnknown) {}

  const Box& box() const noexcept { return box_; }

  void seed(std::size_t idx, Outcome o) { memo_[idx] = o == Outcome::P ? kP : kN; }

  Outcome solve(std::size_t idx) {
    if (memo_[idx] == kUnknown) {
      std::vector<Height> h;
      box_.heights(idx, h);
      const bool winning = box_.any_child(idx, h, [&](std::size_t c) { return solve(c) == Outcome::P; });
      memo_[idx] = winning ? kN : kP;
    }
    return memo_[idx] == kP ? Outcome::P : Outcome::N;
  }

  template <typename F>
  void for_each_resolved(F&& f) const {
    std::vector<Height> h;
    for (std::size_t i = 0; i < memo_.size(); ++i) {
      if (memo_[i] == kUnknown) continue;
      box_.heights(i, h);
      f(h, memo_[i] == kP ? Outcome::P : Outcome::N);
    }
  }

private:
  Box box_;
  std::vector<std::uint8_t> memo_;
};

void require_spec(const Position& p, const OutcomeTable& cache) {
  if (p.spec() != cache.spec()) {
    throw WrongGame("outcome table for " + to_string(cache.spec()) + " queried with " + to_string(p.spec()));
  }
}

TopDown prepare(const Position& p, const OutcomeTable& cache) {
  TopDown solver(p.spec(), p.heights());
  if (cache.size() == 0) return solver;
  std::vector<Height> h;
  for (std::size_t i = 0; i < solver.box().size(); ++i) {
    solver.box().heights(i, h);
    if (auto o = cache.find_key(OutcomeTable::key_of(canonical_heights(h)))) solver.seed(i, *o);
  }
  return solver;
}

void export_into(const TopDown& solver, OutcomeTable& cache) {
  solver.for_each_resolved([&](const std::vector<Height>& h, Outcome o) {
    cache.insert_key(OutcomeTable::key_of(canonical_heights(h)), o);
  });
}

template <typename T>
void put(std::ostream& os, T value) {
  static_assert(std::endian::native == std::endian::little, "table I/O assumes a little-endian host");
  os.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <typename T>
T get(std::istream& is) {
  T value{};
  if (!is.read(reinterpret_cast<char*>(&value), sizeof value)) throw TableFormatError("truncated table header");
  return value;
}

constexpr char kMagic[8] = {'C', 'N', 'I', 'M', 'T', 'B', 'L', '\0'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

std::string_view to_string(Outcome o) { return o == Outcome::P ? "P" : "N"; }

std::string OutcomeTable::key_of(std::span<const Height> canonical) {
  std::string key(canonical.size(), '\0');
  for (std::size_t i = 0; i < canonical.size(); ++i) {
    if (canonical[i] > kMaxKeyHeight) {
      throw std::out_of_range("stack height " + std::to_string(canonical[i]) + " exceeds the table key limit");
    }
    key[i] = static_cast<char>(static_cast<unsigned char>(canonical[i]));
  }
  return key;
}

std::vector<Height> OutcomeTable::heights_of(std::string_view key) {
  std::vector<Height> out(key.size());
  for (std::size_t i = 0; i < key.size(); ++i) out[i] = static_cast<unsigned char>(key[i]);
  return out;
}

std::optional<Outcome> OutcomeTable::find(const Position& p) const {
  if (p.max() > kMaxKeyHeight) return std::nullopt;
  return find_key(key_of(canonical_heights(p.heights())));
}

std::optional<Outcome> OutcomeTable::find_key(const std::string& key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void OutcomeTable::insert(const Position& p, Outcome o) {
  insert_key(key_of(canonical_heights(p.heights())), o);
}

void OutcomeTable::insert_key(std::string key, Outcome o) { entries_.insert_or_assign(std::move(key), o); }

Outcome outcome(const Position& p, OutcomeTable& cache) {
  require_spec(p, cache);
  if (auto hit = cache.find(p)) return *hit;
  TopDown solver = prepare(p, cache);
  const Outcome result = solver.solve(solver.box().index(p.heights()));
  export_into(solver, cache);
  return result;
}

std::vector<Move> winning_options(const Position& p, OutcomeTable& cache) {
  require_spec(p, cache);
  TopDown solver = prepare(p, cache);
  std::vector<Move> out;
  std::vector<Height> child(p.size());
  const auto n = p.size();
  for_each_legal_move(p, [&](const Move& m) {
    child = p.heights();
    for (std::size_t i = 0; i < m.new_heights.size(); ++i) child[(m.window_start + i) % n] = m.new_heights[i];
    if (solver.solve(solver.box().index(child)) == Outcome::P) out.push_back(m);
    return true;
  });
  export_into(solver, cache);
  return out;
}

OutcomeTable solve_all(const GameSpec& spec, int H, unsigned threads) {
  if (H < 0) throw std::invalid_argument("height bound must be non-negative");
  if (H > OutcomeTable::kMaxKeyHeight) throw std::out_of_range("height bound exceeds the table key limit");
  const auto n = static_cast<std::size_t>(spec.n);
  const Box box(spec, std::vector<Height>(n, H));

  // Canonical representatives bucketed by token sum.
  std::vector<std::vector<std::size_t>> layers(n * static_cast<std::size_t>(H) + 1);
  std::vector<Height> h;
  for (std::size_t i = 0; i < box.size(); ++i) {
    box.heights(i, h);
    if (canonical_heights(h) != h) continue;
    Height sum = 0;
    for (Height x : h) sum += x;
    layers[static_cast<std::size_t>(sum)].push_back(i);
  }

  std::vector<std::uint8_t> memo(box.size(), kUnknown);
  std::vector<std::uint8_t> rep_outcome(box.size(), kUnknown);
  const auto transforms = all_transforms(n);

  auto solve_rep = [&](std::size_t idx, std::vector<Height>& hs, std::vector<Height>& image) {
    box.heights(idx, hs);
    const bool winning = box.any_child(idx, hs, [&](std::size_t c) { return memo[c] == kP; });
    const std::uint8_t value = winning ? kN : kP;
    rep_outcome[idx] = value;
    // Orbit members share the token sum, so they belong to this layer and
    // no two representatives write the same slot.
    image.resize(n);
    for (const auto& t : transforms) {
      for (std::size_t j = 0; j < n; ++j) image[j] = hs[source_index(t, j, n)];
      memo[box.index(image)] = value;
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  for (const auto& layer : layers) {
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, (layer.size() + 255) / 256));
    if (workers <= 1) {
      std::vector<Height> hs, image;
      for (std::size_t idx : layer) solve_rep(idx, hs, image);
      continue;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        std::vector<Height> hs, image;
        for (std::size_t i = next++; i < layer.size(); i = next++) solve_rep(layer[i], hs, image);
      });
    }
  }

  OutcomeTable table(spec, H);
  for (const auto& layer : layers) {
    for (std::size_t idx : layer) {
      box.heights(idx, h);
      table.insert_key(OutcomeTable::key_of(h), rep_outcome[idx] == kP ? Outcome::P : Outcome::N);
    }
  }
  return table;
}

void save_table(const OutcomeTable& t, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw TableFormatError("cannot open " + path.string() + " for writing");
  os.write(kMagic, sizeof kMagic);
  put<std::uint32_t>(os, kVersion);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(t.spec().n));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(t.spec().k));
  put<std::int32_t>(os, t.height_bound());
  put<std::uint64_t>(os, t.size());
  for (const auto& [key, o] : t.entries()) {
    os.write(key.data(), static_cast<std::streamsize>(key.size()));
    put<std::uint8_t>(os, static_cast<std::uint8_t>(o));
  }
  if (!os) throw TableFormatError("write to " + path.string() + " failed");
}

OutcomeTable load_table(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw TableFormatError("cannot open " + path.string());
  char magic[sizeof kMagic];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw TableFormatError(path.string() + " is not an outcome table");
  }
  if (const auto version = get<std::uint32_t>(is); version != kVersion) {
    throw TableFormatError("unsupported table version " + std::to_string(version));
  }
  const auto n = get<std::uint32_t>(is);
  const auto k = get<std::uint32_t>(is);
  const auto bound = get<std::int32_t>(is);
  const auto count = get<std::uint64_t>(is);
  if (n < 1 || k < 1 || k > n || n > 64) throw TableFormatError("corrupt game header");

  OutcomeTable t(GameSpec{static_cast<int>(n), static_cast<int>(k)}, bound);
  std::string key(n, '\0');
  std::string previous;
  for (std::uint64_t i = 0; i < count; ++i) {
    if (!is.read(key.data(), static_cast<std::streamsize>(n))) throw TableFormatError("truncated table body");
    const auto bit = get<std::uint8_t>(is);
    if (bit > 1) throw TableFormatError("corrupt outcome byte");
    if (i > 0 && key <= previous) throw TableFormatError("table keys out of order");
    t.insert_key(key, static_cast<Outcome>(bit));
    previous = key;
  }
  if (is.peek() != std::char_traits<char>::eof()) throw TableFormatError("trailing bytes after table body");
  return t;
}

OutcomeTable load_table(const std::filesystem::path& path, const GameSpec& expected) {
  OutcomeTable t = load_table(path);
  if (t.spec() != expected) {
    throw TableFormatError("table is for " + to_string(t.spec()) + ", expected " + to_string(expected));
  }
  return t;
}

void export_csv(const OutcomeTable& t, std::ostream& os) {
  os << "heights,outcome\n";
  for (const auto& [key, o] : t.entries()) {
    os << '"';
    const auto h = OutcomeTable::heights_of(key);
    for (std::size_t i = 0; i < h.size(); ++i) os << (i ? "," : "") << h[i];
    os << "\"," << to_string(o) << '\n';
  }
}

}  // namespace cnim
