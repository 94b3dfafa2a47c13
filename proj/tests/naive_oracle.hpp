// Plain recursive solver used to cross-check the library oracle.  No
// symmetry reduction, no shared code with the library's move generator.

#ifndef CNIM_TESTS_NAIVE_ORACLE_HPP
#define CNIM_TESTS_NAIVE_ORACLE_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

namespace naive {

using Heights = std::vector<std::int64_t>;

// Every successor of h in CN(n,k), n = h.size(); duplicates allowed.
inline void successors(const Heights& h, int k, const std::function<void(const Heights&)>& visit) {
  const int n = static_cast<int>(h.size());
  for (int w = 0; w < n; ++w) {
    std::vector<int> idx;
    for (int i = 0; i < k; ++i) idx.push_back((w + i) % n);
    // Count down through every replacement vector below the window.
    Heights cur = h;
    while (true) {
      int i = 0;
      while (i < k && cur[idx[i]] == 0) {
        cur[idx[i]] = h[idx[i]];
        ++i;
      }
      if (i == k) break;
      --cur[idx[i]];
      visit(cur);
    }
  }
}

class Solver {
public:
  explicit Solver(int k) : k_(k) {}

  bool is_p(const Heights& h) {
    if (auto it = memo_.find(h); it != memo_.end()) return it->second;
    bool p = true;
    successors(h, k_, [&](const Heights& s) {
      if (p && is_p(s)) p = false;
    });
    memo_[h] = p;
    return p;
  }

private:
  int k_;
  std::map<Heights, bool> memo_;
};

// Calls visit on every height vector of length n with entries in 0..H.
inline void for_each_box(int n, std::int64_t H, const std::function<void(const Heights&)>& visit) {
  Heights h(static_cast<std::size_t>(n), 0);
  while (true) {
    visit(h);
    int i = 0;
    while (i < n && h[i] == H) h[i++] = 0;
    if (i == n) return;
    ++h[i];
  }
}

}  // namespace naive

#endif
