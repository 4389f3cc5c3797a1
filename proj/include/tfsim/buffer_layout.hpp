#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "tfsim/core.hpp"

namespace tfsim {

// One fused request's region of the contiguous buffer. An emptied slot keeps
// its last size so orphaned memory is still charged until it leaves the
// live window.
struct Slot {
  std::optional<RequestId> occupant;
  Bytes size = 0;

  bool empty() const { return !occupant.has_value(); }
  friend bool operator==(const Slot&, const Slot&) = default;
};

// Slot-granular model of device memory shared by all fused requests. The
// live window [offset, offset + size) is what kernels and collectives see.
class BufferLayout {
 public:
  // max_slots == 0 means unbounded.
  explicit BufferLayout(std::size_t max_slots = 0) : max_slots_(max_slots) {}

  /// Places a request right after the live window and grows the window by one.
  SlotIndex fuse_request(RequestId id, Bytes size) {
    check(!offsets_.contains(id), Errc::DuplicateRequest,
          "request " + std::to_string(id) + " is already fused");
    check(size > 0, Errc::InvalidParam, "tensor size must be > 0");
    const SlotIndex index = offset_ + size_;
    check(max_slots_ == 0 || index < max_slots_, Errc::CapacityExceeded,
          "slot " + std::to_string(index) + " exceeds capacity " + std::to_string(max_slots_));
    if (index < slots_.size()) {
      slots_[index] = Slot{id, size};
    } else {
      slots_.push_back(Slot{id, size});
    }
    offsets_[id] = index;
    ++size_;
    ++generation_;
    return index;
  }

  /// Orphans the request's slot. The window itself is left alone.
  void evict_request(RequestId id) {
    const auto it = offsets_.find(id);
    check(it != offsets_.end(), Errc::UnknownRequest,
          "request " + std::to_string(id) + " is not in the buffer");
    slots_[it->second].occupant.reset();
    offsets_.erase(it);
    ++generation_;
  }

  /// Drops empty slots from both ends of the live window without moving data.
  /// A window with nothing left in it resets the buffer.
  void trim_boundaries() {
    const SlotIndex old_offset = offset_;
    const std::size_t old_size = size_;
    while (size_ > 0 && slots_[offset_].empty()) {
      ++offset_;
      --size_;
    }
    while (size_ > 0 && slots_[offset_ + size_ - 1].empty()) {
      --size_;
    }
    if (size_ == 0 && !slots_.empty()) {
      slots_.clear();
      offset_ = 0;
      ++generation_;
      return;
    }
    if (offset_ != old_offset || size_ != old_size) {
      ++generation_;
    }
  }

  const std::vector<Slot>& slots() const { return slots_; }
  SlotIndex buffer_offset() const { return offset_; }
  std::size_t buffer_size() const { return size_; }
  std::size_t max_slots() const { return max_slots_; }
  std::uint64_t generation() const { return generation_; }

  std::optional<SlotIndex> slot_of(RequestId id) const {
    const auto it = offsets_.find(id);
    if (it == offsets_.end()) {
      return std::nullopt;
    }
    return it->second;
  }

  std::size_t occupied_count() const { return offsets_.size(); }

  // Bytes spanned by the live window, orphans included.
  Bytes live_bytes() const {
    Bytes total = 0;
    for (SlotIndex i = offset_; i < offset_ + size_; ++i) {
      total += slots_[i].size;
    }
    return total;
  }

  bool has_interior_holes() const {
    for (SlotIndex i = offset_; i < offset_ + size_; ++i) {
      if (slots_[i].empty()) {
        return true;
      }
    }
    return false;
  }

  // True when occupied slots are exactly [offset, offset + size).
  bool contiguous() const {
    if (has_interior_holes()) {
      return false;
    }
    for (SlotIndex i = 0; i < slots_.size(); ++i) {
      const bool inside = i >= offset_ && i < offset_ + size_;
      if (!inside && !slots_[i].empty()) {
        return false;
      }
    }
    return true;
  }

 private:
  friend class ShuffleAccess;

  std::vector<Slot> slots_;
  SlotIndex offset_ = 0;
  std::size_t size_ = 0;
  std::size_t max_slots_ = 0;
  std::unordered_map<RequestId, SlotIndex> offsets_;
  std::uint64_t generation_ = 0;
};

}  // namespace tfsim
