#pragma once

#include <vector>

#include "tfsim/tfsim.hpp"

namespace tfsim::testing {

inline Workload workload_of(const std::vector<Millis>& arrivals, const std::vector<Tokens>& lengths,
                            Tokens max_output_length = 2048, std::uint32_t batch_size = 1) {
  Workload w;
  for (std::size_t i = 0; i < arrivals.size(); ++i) {
    Request r;
    r.id = static_cast<RequestId>(i);
    r.arrival_time = arrivals[i];
    r.actual_output_length = lengths[i];
    r.max_output_length = max_output_length;
    r.batch_size = batch_size;
    w.requests.push_back(r);
  }
  return w;
}

inline std::vector<const Event*> events_of(const Trace& t, EventKind kind) {
  std::vector<const Event*> out;
  for (const auto& e : t.events) {
    if (e.kind == kind) out.push_back(&e);
  }
  return out;
}

inline const Event* first_event(const Trace& t, EventKind kind, RequestId id) {
  for (const auto& e : t.events) {
    if (e.kind == kind && e.request == id) return &e;
  }
  return nullptr;
}

}  // namespace tfsim::testing
