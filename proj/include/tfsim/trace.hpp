#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "tfsim/core.hpp"

namespace tfsim {

enum class EventKind : std::uint8_t {
  Arrived,
  PreprocessStart,
  PreprocessDone,
  Fused,
  TokenGenerated,
  Evicted,
  ShuffleExecuted,
  IterationCompleted,
};

constexpr std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::Arrived: return "Arrived";
    case EventKind::PreprocessStart: return "PreprocessStart";
    case EventKind::PreprocessDone: return "PreprocessDone";
    case EventKind::Fused: return "Fused";
    case EventKind::TokenGenerated: return "TokenGenerated";
    case EventKind::Evicted: return "Evicted";
    case EventKind::ShuffleExecuted: return "ShuffleExecuted";
    case EventKind::IterationCompleted: return "IterationCompleted";
  }
  return "?";
}

// payload by kind: Fused -> slot index (or batch size for dynamic batching),
// TokenGenerated -> token ordinal, Evicted -> tokens generated,
// ShuffleExecuted -> bytes moved, IterationCompleted -> duration in ms.
struct Event {
  Millis time = 0.0;
  EventKind kind = EventKind::Arrived;
  std::optional<RequestId> request;
  double payload = 0.0;

  friend bool operator==(const Event&, const Event&) = default;
};

struct Trace {
  std::string discipline;
  std::vector<Event> events;

  void emit(Millis time, EventKind kind, std::optional<RequestId> request = std::nullopt,
            double payload = 0.0) {
    events.push_back({time, kind, request, payload});
  }

  // Engines emit request-side and stream-side events out of order; this
  // restores time order while keeping emission order among equal times.
  void finalize() {
    std::stable_sort(events.begin(), events.end(),
                     [](const Event& a, const Event& b) { return a.time < b.time; });
  }

  friend bool operator==(const Trace&, const Trace&) = default;
};

// Shortest round-trip decimal form; independent of the C++ locale.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// One line per event: time,kind,request_id,payload ("-" when no request).
inline void write_event_log(std::ostream& os, const Trace& trace) {
  for (const auto& e : trace.events) {
    os << format_double(e.time) << ',' << to_string(e.kind) << ',';
    if (e.request) {
      os << *e.request;
    } else {
      os << '-';
    }
    os << ',' << format_double(e.payload) << '\n';
  }
}

}  // namespace tfsim
