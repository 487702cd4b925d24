#pragma once

// Reference implementations used only by the tests. They share no code with
// the library.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

namespace oracle {

/// Pascal's triangle, C(n, k) for n <= max_n.
inline std::vector<std::vector<std::uint64_t>> pascal(int max_n) {
  std::vector<std::vector<std::uint64_t>> c(max_n + 1);
  for (int n = 0; n <= max_n; ++n) {
    c[n].assign(n + 1, 1);
    for (int k = 1; k < n; ++k) {
      c[n][k] = c[n - 1][k - 1] + c[n - 1][k];
    }
  }
  return c;
}

/// Exhaustive recurrence over the first checkpoint position k:
///   cost(l, s) = min_k  k + cost(l - k, s - 1) + cost(k, s)
/// with cost(1, s) = 0 and cost(l > 1, 0) = infinity. `split` records the
/// leftmost minimising k.
struct CostTable {
  static constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  int max_l = 0;
  int max_s = 0;
  std::vector<std::int64_t> cost;
  std::vector<int> split;

  CostTable(int l_max, int s_max) : max_l(l_max), max_s(s_max) {
    cost.assign((l_max + 1) * (s_max + 1), kInf);
    split.assign((l_max + 1) * (s_max + 1), 0);
    for (int s = 0; s <= s_max; ++s) {
      at(1, s) = 0;
    }
    for (int l = 2; l <= l_max; ++l) {
      for (int s = 1; s <= s_max; ++s) {
        std::int64_t best = kInf;
        int best_k = 0;
        for (int k = 1; k < l; ++k) {
          const std::int64_t right = at(l - k, s - 1);
          const std::int64_t left = at(k, s);
          if (right >= kInf || left >= kInf) {
            continue;
          }
          const std::int64_t c = k + right + left;
          if (c < best) {
            best = c;
            best_k = k;
          }
        }
        at(l, s) = best;
        split[idx(l, s)] = best_k;
      }
    }
  }

  std::size_t idx(int l, int s) const { return static_cast<std::size_t>(l * (max_s + 1) + s); }
  std::int64_t& at(int l, int s) { return cost[idx(l, s)]; }
  std::int64_t operator()(int l, int s) const { return cost[idx(l, s)]; }
  int leftmost_split(int l, int s) const { return split[idx(l, s)]; }
};

/// Iterative repetition-number count of forward steps for a binomial
/// schedule (the loop formulation, not the closed form).
inline std::int64_t numforw(std::int64_t steps, std::int64_t snaps) {
  if (snaps >= steps - 1) {
    return steps - 1;
  }
  std::int64_t reps = 0;
  std::int64_t range = 1;
  while (range < steps) {
    reps += 1;
    range = range * (reps + snaps) / reps;
  }
  return reps * steps - range * reps / (snaps + 1);
}

/// Smallest c in [1, steps] minimising c * numforw(steps, c), no pruning.
inline std::int64_t brute_adjust(std::int64_t steps) {
  std::int64_t best_c = 1;
  std::int64_t best = numforw(steps, 1);
  for (std::int64_t c = 2; c <= steps; ++c) {
    const std::int64_t v = c * numforw(steps, c);
    if (v < best) {
      best = v;
      best_c = c;
    }
  }
  return best_c;
}

}  // namespace oracle
