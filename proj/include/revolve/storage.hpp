#pragma once

#include <algorithm>
#include <cstddef>
#include <new>
#include <span>
#include <string>
#include <vector>

#include "revolve/error.hpp"

namespace revolve {

/// Fixed arena of equal-size checkpoint slots. Slot i occupies bytes
/// [i * slot_size, (i + 1) * slot_size). The arena is zero-initialised and
/// never grows. Slot contents are opaque; the checkpoint owns their layout.
class Storage {
 public:
  Storage(step_t n_slots, step_t slot_size) : n_slots_(n_slots), slot_size_(slot_size) {
    if (n_slots < 1 || slot_size < 1) {
      throw ConfigError("storage: slot count and slot size must be >= 1");
    }
    const step_t total = detail::checked_mul(n_slots, slot_size, "storage");
    try {
      arena_.assign(static_cast<std::size_t>(total), std::byte{0});
      live_.assign(static_cast<std::size_t>(n_slots), false);
    } catch (const std::bad_alloc&) {
      throw ResourceError("storage: cannot allocate " + std::to_string(total) + " bytes");
    } catch (const std::length_error&) {
      throw ResourceError("storage: cannot allocate " + std::to_string(total) + " bytes");
    }
  }

  step_t n_slots() const { return n_slots_; }
  step_t slot_size() const { return slot_size_; }
  step_t allocated_bytes() const { return static_cast<step_t>(arena_.size()); }

  std::span<std::byte> get_item(step_t i) { return {arena_.data() + offset(i), size()}; }
  std::span<const std::byte> get_item(step_t i) const {
    return {arena_.data() + offset(i), size()};
  }

  /// Marks slot i as holding a state that is still needed.
  void mark_live(step_t i) {
    offset(i);
    if (!live_[static_cast<std::size_t>(i)]) {
      live_[static_cast<std::size_t>(i)] = true;
      ++live_count_;
      peak_live_ = std::max(peak_live_, live_count_);
    }
  }

  void release(step_t i) {
    offset(i);
    if (live_[static_cast<std::size_t>(i)]) {
      live_[static_cast<std::size_t>(i)] = false;
      --live_count_;
    }
  }

  bool is_live(step_t i) const {
    offset(i);
    return live_[static_cast<std::size_t>(i)];
  }
  step_t live_count() const { return live_count_; }
  step_t peak_live() const { return peak_live_; }

 private:
  std::size_t size() const { return static_cast<std::size_t>(slot_size_); }

  std::size_t offset(step_t i) const {
    if (i < 0 || i >= n_slots_) {
      throw BoundsError("storage: slot " + std::to_string(i) + " out of range [0, " +
                        std::to_string(n_slots_) + ")");
    }
    return static_cast<std::size_t>(i) * size();
  }

  step_t n_slots_;
  step_t slot_size_;
  std::vector<std::byte> arena_;
  std::vector<bool> live_;
  step_t live_count_ = 0;
  step_t peak_live_ = 0;
};

/// Bytes needed to hold every time level of a field in memory.
inline step_t estimate_full_storage(step_t grid_points, step_t timesteps,
                                    step_t bytes_per_value) {
  if (grid_points < 1 || timesteps < 1 || bytes_per_value < 1) {
    throw ConfigError("estimate_full_storage: inputs must be positive");
  }
  return detail::checked_mul(
      detail::checked_mul(grid_points, timesteps, "estimate_full_storage"),
      bytes_per_value, "estimate_full_storage");
}

}  // namespace revolve
