#pragma once

// A scalar "simulation" for driving the revolver: the state is a 64-bit
// value pushed through an LCG once per step. The reverse operator checks it
// is handed exactly the state the forward sweep had at that step.

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <vector>

namespace toy {

inline std::uint64_t step(std::uint64_t x) {
  return x * 6364136223846793005ULL + 1442695040888963407ULL;
}

inline std::vector<std::uint64_t> history(std::int64_t steps, std::uint64_t x0) {
  std::vector<std::uint64_t> h(static_cast<std::size_t>(steps) + 1);
  h[0] = x0;
  for (std::int64_t t = 0; t < steps; ++t) {
    h[t + 1] = step(h[t]);
  }
  return h;
}

struct State {
  std::int64_t t = 0;
  std::uint64_t x = 0;
};

struct Checkpoint {
  State& s;
  std::size_t padding = 0;  // extra bytes, to vary the slot size

  std::size_t size() const { return sizeof(State) + padding; }
  void save(std::span<std::byte> out) const { std::memcpy(out.data(), &s, sizeof(State)); }
  void load(std::span<const std::byte> in) { std::memcpy(&s, in.data(), sizeof(State)); }
};

struct Forward {
  State& s;
  std::int64_t calls = 0;
  std::int64_t steps_run = 0;

  void apply(std::int64_t t0, std::int64_t t1) {
    if (s.t != t0) {
      throw std::logic_error("toy forward: state mismatch");
    }
    for (std::int64_t t = t0; t < t1; ++t) {
      s.x = step(s.x);
    }
    s.t = t1;
    ++calls;
    steps_run += t1 - t0;
  }
};

struct Reverse {
  State& s;
  const std::vector<std::uint64_t>& expected;
  std::vector<std::int64_t> visited;
  std::int64_t wrong_state = 0;

  void apply(std::int64_t t0, std::int64_t t1) {
    for (std::int64_t t = t1 - 1; t >= t0; --t) {
      visited.push_back(t);
    }
    if (t1 != t0 + 1 || s.t != t0 || s.x != expected[static_cast<std::size_t>(t0)]) {
      ++wrong_state;
    }
  }
};

}  // namespace toy
