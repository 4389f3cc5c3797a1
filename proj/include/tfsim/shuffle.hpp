#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "tfsim/buffer_layout.hpp"

namespace tfsim {

struct ShuffleRegion {
  std::size_t offset = 0;
  std::uint64_t cost = 0;  // weight outside the window, i.e. what must move

  friend bool operator==(const ShuffleRegion&, const ShuffleRegion&) = default;
};

// Sliding-window search for where the compacted region should sit. arr holds
// one weight per slot, 0 for free slots. The window length is the number of
// non-zero entries; the result minimises the weight left outside it. Ties go
// to the earliest window (strict less-than on update). O(n).
inline ShuffleRegion find_shuffled_region(std::span<const std::uint64_t> arr) {
  std::uint64_t total_cost = 0;
  std::size_t non_zero = 0;
  for (const auto v : arr) {
    if (v != 0) {
      ++non_zero;
      total_cost += v;
    }
  }
  if (non_zero == 0) {
    return {0, 0};
  }

  std::uint64_t window_cost = 0;
  for (std::size_t i = 0; i < non_zero; ++i) {
    window_cost += arr[i];
  }
  std::uint64_t min_cost = total_cost - window_cost;
  std::size_t mem_offset = 0;
  for (std::size_t i = non_zero; i < arr.size(); ++i) {
    window_cost = window_cost + arr[i] - arr[i - non_zero];
    const std::uint64_t current_cost = total_cost - window_cost;
    if (current_cost < min_cost) {
      min_cost = current_cost;
      mem_offset = i - non_zero + 1;
    }
  }
  return {mem_offset, min_cost};
}

inline std::size_t find_shuffled_memory_region(std::span<const std::uint64_t> arr) {
  return find_shuffled_region(arr).offset;
}

inline constexpr std::size_t kOracleBound = 4096;

// Reference for find_shuffled_region: sums every candidate window from
// scratch. Quadratic, so limited to max_len entries.
inline ShuffleRegion brute_force_min_window(std::span<const std::uint64_t> arr,
                                            std::size_t max_len = kOracleBound) {
  check(arr.size() <= max_len, Errc::OracleBoundExceeded,
        "array of length " + std::to_string(arr.size()) + " exceeds oracle bound " +
            std::to_string(max_len));
  std::size_t k = 0;
  for (const auto v : arr) {
    k += v != 0 ? 1 : 0;
  }
  if (k == 0) {
    return {0, 0};
  }
  ShuffleRegion best{0, std::numeric_limits<std::uint64_t>::max()};
  for (std::size_t start = 0; start + k <= arr.size(); ++start) {
    std::uint64_t outside = 0;
    for (std::size_t i = 0; i < arr.size(); ++i) {
      if (i < start || i >= start + k) {
        outside += arr[i];
      }
    }
    if (outside < best.cost) {
      best = {start, outside};
    }
  }
  return best;
}

struct ShuffleMove {
  RequestId request_id = 0;
  SlotIndex src = 0;
  SlotIndex dst = 0;
  Bytes bytes = 0;

  friend bool operator==(const ShuffleMove&, const ShuffleMove&) = default;
};

struct ShufflePlan {
  std::vector<ShuffleMove> moves;
  SlotIndex window_offset = 0;  // absolute slot index
  std::size_t window_size = 0;
  Bytes total_bytes_moved = 0;
  std::uint64_t layout_generation = 0;

  bool empty() const { return moves.empty(); }
};

// Slot weights of the live window: 0 for free slots, the slot size otherwise.
inline std::vector<std::uint64_t> window_weights(const BufferLayout& layout) {
  std::vector<std::uint64_t> arr;
  arr.reserve(layout.buffer_size());
  const auto& slots = layout.slots();
  for (SlotIndex i = layout.buffer_offset(); i < layout.buffer_offset() + layout.buffer_size(); ++i) {
    arr.push_back(slots[i].empty() ? 0 : slots[i].size);
  }
  return arr;
}

/// Chooses the destination window and pairs each occupied slot outside it with
/// a free slot inside it, both in ascending index order.
inline ShufflePlan plan_shuffle(const BufferLayout& layout) {
  const auto arr = window_weights(layout);
  const ShuffleRegion region = find_shuffled_region(arr);

  std::size_t occupied = 0;
  for (const auto v : arr) {
    occupied += v != 0 ? 1 : 0;
  }

  ShufflePlan plan;
  plan.layout_generation = layout.generation();
  plan.window_offset = layout.buffer_offset() + region.offset;
  plan.window_size = occupied;

  const auto& slots = layout.slots();
  std::vector<SlotIndex> sources;
  std::vector<SlotIndex> holes;
  for (std::size_t rel = 0; rel < arr.size(); ++rel) {
    const bool inside = rel >= region.offset && rel < region.offset + occupied;
    const SlotIndex abs = layout.buffer_offset() + rel;
    if (inside && arr[rel] == 0) {
      holes.push_back(abs);
    } else if (!inside && arr[rel] != 0) {
      sources.push_back(abs);
    }
  }
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const Slot& s = slots[sources[i]];
    plan.moves.push_back({*s.occupant, sources[i], holes[i], s.size});
    plan.total_bytes_moved += s.size;
  }
  return plan;
}

class ShuffleAccess {
 public:
  static void apply(BufferLayout& layout, const ShufflePlan& plan) {
    check(plan.layout_generation == layout.generation_, Errc::StalePlan,
          "layout changed since the plan was made");
    for (const auto& m : plan.moves) {
      Slot& src = layout.slots_[m.src];
      Slot& dst = layout.slots_[m.dst];
      dst = Slot{src.occupant, src.size};
      src.occupant.reset();
      layout.offsets_[m.request_id] = m.dst;
    }
    const bool changed = !plan.moves.empty() || layout.offset_ != plan.window_offset ||
                         layout.size_ != plan.window_size;
    layout.offset_ = plan.window_offset;
    layout.size_ = plan.window_size;
    if (changed) {
      ++layout.generation_;
    }
    layout.trim_boundaries();
  }
};

/// Executes a plan made against this exact layout state.
inline void apply_shuffle(BufferLayout& layout, const ShufflePlan& plan) {
  ShuffleAccess::apply(layout, plan);
}

}  // namespace tfsim
