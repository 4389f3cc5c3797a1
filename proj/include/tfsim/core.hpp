#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "tfsim/error.hpp"

namespace tfsim {

using RequestId = std::uint32_t;
using Millis = double;
using Bytes = std::uint64_t;
using Tokens = std::uint32_t;
using SlotIndex = std::size_t;

inline constexpr SlotIndex kNoSlot = std::numeric_limits<SlotIndex>::max();

// One inference task. actual_output_length is the iteration at which the
// end-of-sequence token appears; it is fixed when the request is created.
struct Request {
  RequestId id = 0;
  std::uint32_t batch_size = 1;
  Tokens input_len = 1;
  Tokens max_output_length = 1;
  Tokens actual_output_length = 1;
  Millis arrival_time = 0.0;

  // Tokens the request will actually generate.
  Tokens output_tokens() const { return std::min(actual_output_length, max_output_length); }
};

inline void validate(const Request& r) {
  check(r.batch_size >= 1, Errc::InvalidParam, "batch_size must be >= 1");
  check(r.input_len >= 1, Errc::InvalidParam, "input_len must be >= 1");
  check(r.max_output_length >= 1, Errc::InvalidParam, "max_output_length must be >= 1");
  check(r.actual_output_length >= 1 && r.actual_output_length <= r.max_output_length,
        Errc::InvalidParam, "actual_output_length must lie in [1, max_output_length]");
  check(r.arrival_time >= 0.0, Errc::InvalidParam, "arrival_time must be >= 0");
}

enum class Phase : std::uint8_t {
  Received,
  Preprocessing,
  ReadyForFusion,
  Running,
  Finished,
};

constexpr std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::Received: return "Received";
    case Phase::Preprocessing: return "Preprocessing";
    case Phase::ReadyForFusion: return "ReadyForFusion";
    case Phase::Running: return "Running";
    case Phase::Finished: return "Finished";
  }
  return "?";
}

/// Moves a request one step along Received -> Preprocessing -> ReadyForFusion
/// -> Running -> Finished. Anything else is an engine bug.
inline Phase advance_phase(Phase current, Phase target) {
  const bool ok = current != Phase::Finished &&
                  static_cast<int>(target) == static_cast<int>(current) + 1;
  if (!ok) {
    throw Error(Errc::IllegalTransition, std::string(to_string(current)) + " -> " +
                                             std::string(to_string(target)));
  }
  return target;
}

enum class DeviceType : std::uint8_t { Gpu, Cpu };

// Per-request fusion bookkeeping. device_type is carried but never consulted.
struct RuntimeInfo {
  RequestId request_id = 0;
  SlotIndex memory_offset = kNoSlot;
  Bytes tensor_size = 1;
  DeviceType device_type = DeviceType::Gpu;
  Tokens max_output_length = 1;
  Tokens current_iteration = 0;
};

struct TokenResult {
  RuntimeInfo info;
  bool finished = false;
};

// Generates one token. finished is set when the request reaches its EOS
// iteration or its length limit.
inline TokenResult record_token(RuntimeInfo info, Tokens eos_at) {
  if (info.current_iteration >= info.max_output_length) {
    throw Error(Errc::AlreadyFinished,
                "request " + std::to_string(info.request_id) + " already at max_output_length");
  }
  ++info.current_iteration;
  const Tokens stop = std::min(eos_at, info.max_output_length);
  const bool finished = info.current_iteration == stop;
  return {info, finished};
}

// Output of pre-processing: the request can be fused from ready_time onwards.
struct Context {
  RequestId request_id = 0;
  Millis ready_time = 0.0;
};

}  // namespace tfsim
