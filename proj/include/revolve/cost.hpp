#pragma once

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "revolve/error.hpp"

namespace revolve {

/// Largest number of steps reversible with `s` slots when no step is
/// recomputed more than `t` times: the binomial coefficient C(s + t, t).
inline step_t beta(step_t s, step_t t) {
  if (s < 0 || t < 0) {
    throw ConfigError("beta: arguments must be non-negative");
  }
  // C(s+i, i) = C(s+i-1, i-1) * (s+i) / i, exact at every i; the running
  // value stays below 2^63 so the product fits in 128 bits.
  using wide = unsigned __int128;
  constexpr auto kMax = static_cast<wide>(std::numeric_limits<step_t>::max());
  wide acc = 1;
  for (step_t i = 1; i <= t; ++i) {
    acc = acc * (static_cast<wide>(s) + static_cast<wide>(i)) / static_cast<wide>(i);
    if (acc > kMax) {
      throw OverflowError("beta(" + std::to_string(s) + ", " +
                          std::to_string(t) + "): 64-bit overflow");
    }
  }
  return static_cast<step_t>(acc);
}

namespace detail {

inline step_t beta_or_zero(step_t s, step_t t) { return t < 0 ? 0 : beta(s, t); }

inline void require_positive(step_t steps, step_t snaps, const char* who) {
  if (steps < 1) {
    throw ConfigError(std::string(who) + ": steps must be >= 1, got " +
                      std::to_string(steps));
  }
  if (snaps < 1) {
    throw ConfigError(std::string(who) + ": snaps must be >= 1, got " +
                      std::to_string(snaps));
  }
}

}  // namespace detail

/// Smallest repetition number r with beta(snaps, r) >= steps.
inline step_t repetition_number(step_t steps, step_t snaps) {
  detail::require_positive(steps, snaps, "repetition_number");
  // beta(s, r) = beta(s, r - 1) * (s + r) / r, exact at every step
  using u128 = unsigned __int128;
  step_t reps = 0;
  u128 range = 1;
  while (range < static_cast<u128>(steps)) {
    ++reps;
    range = range * (static_cast<u128>(snaps) + static_cast<u128>(reps)) / static_cast<u128>(reps);
  }
  return reps;
}

/// Total forward steps issued by Advance actions in an optimal reversal of
/// `steps` steps with `snaps` slots (the initial state occupies one slot).
/// The forward half of every Firstrun/Youturn is not counted, so a run
/// without recomputation costs steps - 1.
inline step_t min_advances(step_t steps, step_t snaps) {
  detail::require_positive(steps, snaps, "min_advances");
  const step_t reps = repetition_number(steps, snaps);
  return detail::checked_mul(reps, steps, "min_advances") -
         detail::beta_or_zero(snaps + 1, reps - 1);
}

/// Leftmost optimal position of the next checkpoint when reversing `steps`
/// steps from a stored base with `snaps` slots (base included).
inline step_t optimal_split(step_t steps, step_t snaps) {
  detail::require_positive(steps, snaps, "optimal_split");
  if (steps < 2) {
    throw ConfigError("optimal_split: needs at least two steps");
  }
  const step_t reps = repetition_number(steps, snaps);
  const step_t right_cap = detail::beta_or_zero(snaps - 1, reps);
  const step_t left_floor = detail::beta_or_zero(snaps, reps - 2);
  return std::max({step_t{1}, steps - right_cap, left_floor});
}

inline constexpr step_t kDpMaxSteps = 500;
inline constexpr step_t kDpMaxSnaps = 16;

/// Minimum total advances by dynamic programming over the first split:
///   cost(l, s) = min_k  k + cost(l - k, s - 1) + cost(k, s),
///   cost(1, s) = 0,  cost(l > 1, 0) = infinity.
/// Independent of the closed form; refuses instances above kDpMaxSteps x
/// kDpMaxSnaps.
inline step_t optimal_dp(step_t steps, step_t snaps) {
  detail::require_positive(steps, snaps, "optimal_dp");
  // More than steps - 1 slots never helps.
  const step_t s_eff = std::min(snaps, std::max<step_t>(steps - 1, 1));
  if (steps > kDpMaxSteps || s_eff > kDpMaxSnaps) {
    throw ConfigError("optimal_dp: instance (" + std::to_string(steps) + ", " +
                      std::to_string(snaps) + ") exceeds the oracle limit (" +
                      std::to_string(kDpMaxSteps) + ", " +
                      std::to_string(kDpMaxSnaps) + ")");
  }
  constexpr step_t kInf = std::numeric_limits<step_t>::max() / 4;
  const auto width = static_cast<std::size_t>(steps + 1);
  std::vector<step_t> table(static_cast<std::size_t>(s_eff + 1) * width, kInf);
  auto at = [&](step_t l, step_t s) -> step_t& {
    return table[static_cast<std::size_t>(s) * width + static_cast<std::size_t>(l)];
  };
  for (step_t s = 0; s <= s_eff; ++s) {
    at(1, s) = 0;
  }
  for (step_t s = 1; s <= s_eff; ++s) {
    for (step_t l = 2; l <= steps; ++l) {
      step_t best = kInf;
      for (step_t k = 1; k < l; ++k) {
        const step_t right = at(l - k, s - 1);
        if (right >= kInf) {
          continue;
        }
        best = std::min(best, k + right + at(k, s));
      }
      at(l, s) = best;
    }
  }
  return at(steps, s_eff);
}

/// Slot count minimising slots x min_advances, ties toward fewer slots.
inline step_t adjust(step_t steps) {
  if (steps < 1) {
    throw ConfigError("adjust: steps must be >= 1, got " + std::to_string(steps));
  }
  step_t best_snaps = 1;
  step_t best = min_advances(steps, 1);
  // min_advances(steps, c) >= steps - 1, so c * (steps - 1) bounds every
  // product from below; beyond steps - 1 slots the cost is flat.
  const step_t last = std::max<step_t>(1, steps - 1);
  for (step_t c = 2; c <= last; ++c) {
    if (detail::checked_mul(c, steps - 1, "adjust") >= best) {
      break;
    }
    const step_t value = detail::checked_mul(c, min_advances(steps, c), "adjust");
    if (value < best) {
      best = value;
      best_snaps = c;
    }
  }
  return best_snaps;
}

}  // namespace revolve
